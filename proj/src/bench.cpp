#include "ajl/bench.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ajl/csv.hpp"
#include "ajl/errors.hpp"
#include "ajl/query_parser.hpp"

namespace ajl {

namespace {

struct Cell {
  Execution first;
  double median_ms = 0.0;
};

Cell measure(Strategy s, const Query& q, std::span<const Relation> atoms, const BloomParams& bloom,
             std::size_t reps) {
  Cell cell;
  std::vector<double> times;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    auto e = execute(s, q, atoms, bloom);
    times.push_back(std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
    if (r == 0) cell.first = std::move(e);
  }
  std::sort(times.begin(), times.end());
  cell.median_ms = times.size() % 2 ? times[times.size() / 2]
                                    : (times[times.size() / 2 - 1] + times[times.size() / 2]) / 2.0;
  return cell;
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

BenchReport bench(const BenchConfig& cfg) {
  if (cfg.strategies.empty()) throw ContractError("bench needs at least one strategy");
  if (cfg.instances.empty()) throw ContractError("bench needs at least one instance");
  BenchReport report;
  report.repetitions = std::max<std::size_t>(cfg.repetitions, 3);

  for (const auto& dir : cfg.instances) {
    const auto q = load_query(dir / "query.cq");
    const auto db = load_csv(dir, q);
    const auto atoms = bind_atoms(q, db);
    const auto base = measure(Strategy::hashjoin, q, atoms, cfg.bloom, report.repetitions);
    for (auto s : cfg.strategies) {
      const auto cell = s == Strategy::hashjoin ? base : measure(s, q, atoms, cfg.bloom, report.repetitions);
      BenchRow row;
      row.instance = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
      row.strategy = s;
      row.output_size = cell.first.output.size();
      row.stats = cell.first.stats;
      row.median_ms = cell.median_ms;
      row.work_ratio = ratio(static_cast<double>(row.stats.total()), static_cast<double>(base.first.stats.total()));
      row.time_ratio = ratio(cell.median_ms, base.median_ms);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

nlohmann::ordered_json BenchReport::to_json() const {
  nlohmann::ordered_json j;
  j["repetitions"] = repetitions;
  j["baseline"] = "hashjoin";
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["instance"] = r.instance;
    row["strategy"] = strategy_name(r.strategy);
    row["output_size"] = r.output_size;
    row["counters"] = {{"hash_build_inserts", r.stats.hash_build_inserts},
                       {"hash_probes", r.stats.hash_probes},
                       {"probe_misses", r.stats.probe_misses},
                       {"tuples_materialized", r.stats.tuples_materialized},
                       {"semijoin_drops", r.stats.semijoin_drops},
                       {"ttj_deletions", r.stats.ttj_deletions}};
    row["total_work"] = r.stats.total();
    row["median_ms"] = r.median_ms;
    row["work_ratio_vs_hashjoin"] = r.work_ratio ? nlohmann::ordered_json(*r.work_ratio) : nullptr;
    row["time_ratio_vs_hashjoin"] = r.time_ratio ? nlohmann::ordered_json(*r.time_ratio) : nullptr;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

void BenchReport::print_table(std::ostream& out) const {
  const std::vector<std::string> header{"instance", "strategy", "output", "probes", "inserts", "materialized",
                                        "drops",    "work",     "median_ms", "work/hj", "time/hj"};
  std::vector<std::vector<std::string>> cells{header};
  auto fixed = [](double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
  };
  for (const auto& r : rows) {
    cells.push_back({r.instance, strategy_name(r.strategy), std::to_string(r.output_size),
                     std::to_string(r.stats.hash_probes), std::to_string(r.stats.hash_build_inserts),
                     std::to_string(r.stats.tuples_materialized), std::to_string(r.stats.semijoin_drops),
                     std::to_string(r.stats.total()), fixed(r.median_ms, 3),
                     r.work_ratio ? fixed(*r.work_ratio, 2) : "-", r.time_ratio ? fixed(*r.time_ratio, 2) : "-"});
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      if (c < 2) {
        out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      } else {
        out << std::right << std::setw(static_cast<int>(width[c])) << row[c];
      }
    }
    out << '\n';
  }
}

}  // namespace ajl
