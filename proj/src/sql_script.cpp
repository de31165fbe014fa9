#include "ajl/sql_script.hpp"

#include <algorithm>

#include "ajl/errors.hpp"

namespace ajl {

std::string SqlScript::text() const {
  std::string out;
  for (std::size_t i = 0; i < statements.size(); ++i) {
    if (i) out += "\n";
    out += statements[i] + "\n";
  }
  return out;
}

namespace {

bool contains(const std::vector<std::string>& vs, const std::string& v) {
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

std::string quote(const std::string& id) { return "\"" + id + "\""; }

struct Table {
  std::string source;  // name or parenthesized subquery
  std::vector<std::string> vars;
};

std::string on_clause(const std::vector<std::string>& shared) {
  std::string out;
  for (std::size_t i = 0; i < shared.size(); ++i) {
    out += (i ? " AND " : "") + std::string("l.") + quote(shared[i]) + " = r." + quote(shared[i]);
  }
  return out;
}

std::vector<std::string> common(const Table& a, const Table& b) {
  std::vector<std::string> out;
  for (const auto& v : a.vars) {
    if (contains(b.vars, v)) out.push_back(v);
  }
  return out;
}

class Emitter {
 public:
  Emitter(const Query& q, const BaseColumns& columns) : q_(q) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto& a = q.atom(i);
      Table t{quote(a.relation), a.vars};
      if (auto it = columns.find(a.relation); it != columns.end()) {
        if (it->second.size() != a.vars.size()) {
          throw SchemaError("table " + a.relation + " has " + std::to_string(it->second.size()) +
                            " columns but its atom binds " + std::to_string(a.vars.size()));
        }
        std::string sel;
        for (std::size_t c = 0; c < a.vars.size(); ++c) {
          sel += (c ? ", " : "") + quote(it->second[c]) + " AS " + quote(a.vars[c]);
        }
        t.source = "(SELECT " + sel + " FROM " + quote(a.relation) + ")";
      }
      tables_.push_back(std::move(t));
    }
  }

  void semijoin(std::size_t target, std::size_t source, const std::string& suffix) {
    auto& l = tables_[target];
    const auto& r = tables_[source];
    auto shared = common(l, r);
    const auto name = fresh(q_.atom(target).relation + "_" + std::to_string(target) + "_" + suffix);
    std::string where = "SELECT 1 FROM " + r.source + " AS r";
    if (!shared.empty()) where += " WHERE " + on_clause(shared);
    script_.statements.push_back("CREATE TEMP TABLE " + name + " AS SELECT * FROM " + l.source +
                                 " AS l WHERE EXISTS (" + where + ");");
    l.source = name;
  }

  /// Joins table `right` into `left`, keeping `keep` (in left-then-right order).
  Table join(const Table& left, const Table& right, const std::vector<std::string>& keep, bool last) {
    auto shared = common(left, right);
    std::vector<std::string> out_vars;
    std::string cols;
    for (const auto& v : left.vars) {
      if (contains(keep, v)) {
        cols += (out_vars.empty() ? "" : ", ") + std::string("l.") + quote(v);
        out_vars.push_back(v);
      }
    }
    for (const auto& v : right.vars) {
      if (contains(keep, v) && !contains(out_vars, v)) {
        cols += (out_vars.empty() ? "" : ", ") + std::string("r.") + quote(v);
        out_vars.push_back(v);
      }
    }
    if (last) {
      cols.clear();
      for (std::size_t i = 0; i < q_.head().size(); ++i) {
        const auto& v = q_.head()[i];
        cols += (i ? ", " : "") + std::string(contains(left.vars, v) ? "l." : "r.") + quote(v);
      }
      if (cols.empty()) cols = "1 AS " + quote("nonempty");
    } else if (cols.empty()) {
      cols = "1 AS " + quote("nonempty");
    }
    std::string from = left.source + " AS l ";
    from += shared.empty() ? "CROSS JOIN " + right.source + " AS r"
                           : "JOIN " + right.source + " AS r ON " + on_clause(shared);
    const std::string select = "SELECT DISTINCT " + cols + " FROM " + from;
    if (last) {
      script_.statements.push_back(select + ";");
      return Table{"", q_.head()};
    }
    const auto name = fresh("Q" + std::to_string(++joins_));
    script_.statements.push_back("CREATE TEMP TABLE " + name + " AS " + select + ";");
    return Table{name, out_vars};
  }

  void single(std::size_t atom) {
    const auto& t = tables_[atom];
    std::string cols;
    for (std::size_t i = 0; i < q_.head().size(); ++i) cols += (i ? ", " : "") + quote(q_.head()[i]);
    if (cols.empty()) cols = "1 AS " + quote("nonempty");
    script_.statements.push_back("SELECT DISTINCT " + cols + " FROM " + t.source + " AS l;");
  }

  Table& table(std::size_t i) { return tables_[i]; }
  SqlScript take() { return std::move(script_); }

 private:
  std::string fresh(std::string base) {
    auto name = base;
    for (int k = 2; std::find(used_.begin(), used_.end(), name) != used_.end(); ++k) name = base + std::to_string(k);
    used_.push_back(name);
    return name;
  }

  const Query& q_;
  std::vector<Table> tables_;
  std::vector<std::string> used_;
  SqlScript script_;
  std::size_t joins_ = 0;
};

}  // namespace

SqlScript emit_sql_script(const Query& q, const JoinTree& t, SqlMode mode, const BaseColumns& columns) {
  validate_join_tree(t, q);
  Emitter e(q, columns);
  const auto n = q.size();
  const auto post = t.post_order();

  for (auto x : post) {
    for (auto c : t.children(x)) e.semijoin(x, c, "up");
  }
  if (mode == SqlMode::three_pass) {
    for (auto x : t.pre_order()) {
      for (auto c : t.children(x)) e.semijoin(c, x, "down");
    }
  }
  if (n == 1) {
    e.single(0);
    return e.take();
  }

  std::size_t emitted = 0;
  if (mode == SqlMode::three_pass) {
    std::vector<Table> subtree(n);
    for (std::size_t i = 0; i < n; ++i) subtree[i] = e.table(i);
    for (auto x : post) {
      for (auto c : t.children(x)) {
        const bool last = ++emitted == n - 1;
        std::vector<std::string> keep = q.head();
        if (t.parent(x) >= 0) {
          for (const auto& v : q.atom(static_cast<std::size_t>(t.parent(x))).vars) keep.push_back(v);
        }
        // Later siblings of `c` still need the node's own variables.
        for (const auto& v : q.atom(x).vars) keep.push_back(v);
        subtree[x] = e.join(subtree[x], subtree[c], keep, last);
      }
    }
  } else {
    auto order = t.bfs_order();
    Table acc = e.table(order[0]);
    for (std::size_t k = 1; k < n; ++k) {
      std::vector<std::string> keep = q.head();
      for (std::size_t r = k + 1; r < n; ++r) {
        for (const auto& v : q.atom(order[r]).vars) keep.push_back(v);
      }
      acc = e.join(acc, e.table(order[k]), keep, k == n - 1);
    }
  }
  return e.take();
}

}  // namespace ajl
