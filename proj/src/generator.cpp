#include "ajl/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_set>

#include "ajl/csv.hpp"
#include "ajl/errors.hpp"
#include "ajl/join_tree.hpp"
#include "ajl/query_parser.hpp"

namespace ajl {

Shape parse_shape(std::string_view name) {
  if (name == "path") return Shape::path;
  if (name == "star") return Shape::star;
  if (name == "snowflake") return Shape::snowflake;
  if (name == "fanout") return Shape::fanout;
  if (name == "quadratic-adversarial" || name == "quadratic") return Shape::quadratic_adversarial;
  throw ContractError("unsupported shape '" + std::string(name) + "'");
}

std::string shape_name(Shape s) {
  switch (s) {
    case Shape::path: return "path";
    case Shape::star: return "star";
    case Shape::snowflake: return "snowflake";
    case Shape::fanout: return "fanout";
    case Shape::quadratic_adversarial: return "quadratic-adversarial";
  }
  return "path";
}

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Modulo reduction keeps the stream identical across standard libraries.
  std::int64_t below(std::int64_t n) { return static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 engine_;
};

Atom atom(std::string name, std::vector<std::string> vars) { return Atom{std::move(name), std::move(vars)}; }

Query shape_query(const GenConfig& cfg) {
  std::vector<Atom> body;
  const auto n = cfg.atoms;
  switch (cfg.shape) {
    case Shape::path:
      for (std::size_t i = 0; i < n; ++i) {
        body.push_back(atom("R" + std::to_string(i), {"x" + std::to_string(i), "x" + std::to_string(i + 1)}));
      }
      break;
    case Shape::star: {
      std::vector<std::string> keys;
      for (std::size_t i = 1; i < n; ++i) keys.push_back("k" + std::to_string(i));
      body.push_back(atom("F", keys));
      for (std::size_t i = 1; i < n; ++i) {
        body.push_back(atom("D" + std::to_string(i), {"k" + std::to_string(i), "v" + std::to_string(i)}));
      }
      break;
    }
    case Shape::snowflake: {
      const std::size_t dims = (n - 1 + 1) / 2;
      const std::size_t subs = n - 1 - dims;
      std::vector<std::string> keys;
      for (std::size_t i = 1; i <= dims; ++i) keys.push_back("k" + std::to_string(i));
      body.push_back(atom("F", keys));
      for (std::size_t i = 1; i <= dims; ++i) {
        body.push_back(atom("D" + std::to_string(i), {"k" + std::to_string(i), "s" + std::to_string(i)}));
      }
      for (std::size_t i = 1; i <= subs; ++i) {
        body.push_back(atom("E" + std::to_string(i), {"s" + std::to_string(i), "t" + std::to_string(i)}));
      }
      break;
    }
    case Shape::fanout:
      body.push_back(atom("R", {"k"}));
      for (std::size_t i = 1; i < n; ++i) {
        body.push_back(atom("S" + std::to_string(i), {"k", "v" + std::to_string(i)}));
      }
      break;
    case Shape::quadratic_adversarial:
      body = {atom("R", {"a", "b"}), atom("S", {"b", "c"}), atom("T", {"c", "d"})};
      break;
  }
  std::vector<std::string> head;
  for (const auto& a : body) {
    for (const auto& v : a.vars) {
      if (std::find(head.begin(), head.end(), v) == head.end()) head.push_back(v);
    }
  }
  return Query(std::move(head), std::move(body), "Q");
}

std::vector<Tuple> unique_rows(std::vector<Tuple> rows) {
  std::unordered_set<Tuple, TupleHash> seen;
  std::vector<Tuple> out;
  for (auto& r : rows) {
    if (seen.insert(r).second) out.push_back(std::move(r));
  }
  return out;
}

GeneratedInstance quadratic(const GenConfig& cfg) {
  const auto n = static_cast<std::int64_t>(cfg.tuples);
  std::vector<Tuple> r, s;
  for (std::int64_t i = 0; i < n; ++i) {
    r.push_back({i, std::int64_t{0}});
    s.push_back({std::int64_t{0}, i});
  }
  GeneratedInstance inst{shape_query(cfg), {}, {}};
  inst.db.emplace("R", Relation(Schema{"a", "b"}, std::move(r)));
  inst.db.emplace("S", Relation(Schema{"b", "c"}, std::move(s)));
  inst.db.emplace("T", Relation(Schema{"c", "d"}, {{std::int64_t{0}, std::int64_t{0}}}));
  const auto n2 = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
  inst.manifest["expected_output"] = n;
  inst.manifest["binary_join_intermediate"] = n2;
  inst.manifest["intermediate_lower_bound"] = n2 / 2;
  return inst;
}

}  // namespace

GeneratedInstance generate_instance(const GenConfig& cfg) {
  if (cfg.dangling < 0.0 || cfg.dangling > 1.0) throw ContractError("dangling fraction must lie in [0, 1]");
  if (cfg.tuples == 0) throw ContractError("tuples per relation must be positive");
  if (cfg.shape != Shape::quadratic_adversarial) {
    if (cfg.atoms < 1) throw ContractError("at least one atom is required");
    if (cfg.shape != Shape::path && cfg.atoms < 2) throw ContractError("this shape needs at least two atoms");
    if (cfg.domain < 1) throw ContractError("domain size must be positive");
  }

  GeneratedInstance inst;
  if (cfg.shape == Shape::quadratic_adversarial) {
    inst = quadratic(cfg);
  } else {
    inst.query = shape_query(cfg);
    const auto& q = inst.query;
    const auto tree = build_join_tree(q);
    Rng rng(cfg.seed);
    const auto n = static_cast<std::int64_t>(cfg.tuples);
    const auto dangling = static_cast<std::int64_t>(std::llround(cfg.dangling * static_cast<double>(n)));
    // Dangling keys live above every value a joining tuple can take.
    const std::int64_t stride = std::max<std::int64_t>({cfg.domain, n, 4 * n});

    // Joining rows per atom (dangling rows excluded), used by the children for coverage.
    std::vector<std::vector<Tuple>> good(q.size());
    for (auto x : tree.pre_order()) {
      const auto& vars = q.atom(x).vars;
      const bool payload_wide = cfg.shape == Shape::fanout && x != 0;
      auto random_value = [&](std::size_t) -> Value {
        return rng.below(payload_wide ? 4 * n : cfg.domain);
      };
      std::vector<Tuple> rows;
      if (tree.parent(x) < 0) {
        if (cfg.shape == Shape::fanout) {
          for (std::int64_t v = 0; v < std::min<std::int64_t>(n, cfg.domain); ++v) rows.push_back({v});
        } else {
          for (std::int64_t j = 0; j < n; ++j) {
            Tuple t;
            for (std::size_t c = 0; c < vars.size(); ++c) t.push_back(Value{rng.below(cfg.domain)});
            rows.push_back(std::move(t));
          }
        }
        good[x] = unique_rows(rows);
        inst.db.emplace(q.atom(x).relation, Relation(Schema(vars), good[x]));
        continue;
      }

      const auto p = static_cast<std::size_t>(tree.parent(x));
      const auto shared = shared_vars(q.atom(x), q.atom(p));
      const auto ppos = Schema(q.atom(p).vars).positions(shared);
      std::vector<Tuple> keys;
      {
        std::unordered_set<Tuple, TupleHash> seen;
        for (const auto& t : good[p]) {
          auto k = key_of(t, ppos);
          if (seen.insert(k).second) keys.push_back(std::move(k));
        }
      }
      std::vector<std::size_t> shared_at(vars.size(), vars.size());
      for (std::size_t c = 0; c < vars.size(); ++c) {
        auto it = std::find(shared.begin(), shared.end(), vars[c]);
        if (it != shared.end()) shared_at[c] = static_cast<std::size_t>(it - shared.begin());
      }

      const std::int64_t joining = keys.empty() ? 0 : n - dangling;
      for (std::int64_t j = 0; j < joining; ++j) {
        const auto& key = j < static_cast<std::int64_t>(keys.size())
                              ? keys[static_cast<std::size_t>(j)]
                              : keys[static_cast<std::size_t>(rng.below(static_cast<std::int64_t>(keys.size())))];
        Tuple t;
        for (std::size_t c = 0; c < vars.size(); ++c) {
          t.push_back(shared_at[c] < vars.size() ? key[shared_at[c]] : random_value(c));
        }
        rows.push_back(std::move(t));
      }
      good[x] = unique_rows(rows);
      const std::int64_t base = stride * static_cast<std::int64_t>(1 + x);
      for (std::int64_t j = 0; j < dangling; ++j) {
        Tuple t;
        for (std::size_t c = 0; c < vars.size(); ++c) {
          t.push_back(shared_at[c] < vars.size() ? Value{base + j} : random_value(c));
        }
        rows.push_back(std::move(t));
      }
      inst.db.emplace(q.atom(x).relation, Relation(Schema(vars), std::move(rows)));
    }
  }

  auto& m = inst.manifest;
  m["shape"] = shape_name(cfg.shape);
  m["atoms"] = inst.query.size();
  m["tuples"] = cfg.tuples;
  m["domain"] = cfg.domain;
  m["dangling"] = cfg.dangling;
  m["seed"] = cfg.seed;
  m["query"] = format_query(inst.query);
  for (const auto& [name, rel] : inst.db) m["relations"][name] = rel.size();
  return inst;
}

void write_instance(const std::filesystem::path& dir, const GeneratedInstance& inst) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, rel] : inst.db) write_relation_csv(dir / (name + ".csv"), rel);
  {
    std::ofstream out(dir / "query.cq");
    if (!out) throw IoError("cannot write " + (dir / "query.cq").string());
    out << format_query(inst.query);
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << inst.manifest.dump(2) << '\n';
}

}  // namespace ajl
