#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "ajl/bench.hpp"
#include "ajl/csv.hpp"
#include "ajl/errors.hpp"
#include "ajl/generator.hpp"
#include "ajl/join_tree.hpp"
#include "ajl/query_parser.hpp"
#include "ajl/runner.hpp"
#include "ajl/sql_script.hpp"

namespace {

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("AJL_SEED"); env && *env) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ajl::ContractError(std::string("AJL_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const ajl::AcyclicityError& err) {
    std::cerr << "error: " << err.what() << '\n';
    for (const auto& edge : err.residue()) {
      std::cerr << "  residue edge {";
      for (std::size_t i = 0; i < edge.size(); ++i) std::cerr << (i ? "," : "") << edge[i];
      std::cerr << "}\n";
    }
    return 2;
  } catch (const ajl::IoError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
}

void write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path);
  if (!out) throw ajl::IoError("cannot write " + *path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acyclic join evaluation: Yannakakis variants, predicate transfer and zero-overhead joins"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Evaluate a query on CSV data with one strategy");
  std::string query, data, strategy = "ya", aggregate;
  std::optional<std::uint64_t> run_seed;
  std::optional<std::string> output, stats_path;
  std::vector<std::string> groupby;
  ajl::BloomParams bloom;
  run->add_option("--query,-q", query, "Query file")->required();
  run->add_option("--data,-d", data, "Directory with one <relation>.csv per atom")->required();
  run->add_option("--strategy,-s", strategy, "oracle|hashjoin|ya|ya2|yaplus|pt|rpt|ttj|nested")
      ->capture_default_str();
  run->add_option("--seed", run_seed, "Seed for Bloom hashing (falls back to AJL_SEED, then 0)");
  run->add_option("--bloom-bits-per-key", bloom.bits_per_key, "Bloom filter bits per key")->capture_default_str();
  run->add_option("--bloom-hashes", bloom.hashes, "Bloom filter hash count")->capture_default_str();
  run->add_option("--aggregate", aggregate, "count | sum:<attr> | min:<attr>");
  run->add_option("--groupby", groupby, "Group-by variables")->delimiter(',');
  run->add_option("--output,-o", output, "Result CSV (stdout when omitted)");
  run->add_option("--stats", stats_path, "Stats JSON");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  std::string shape = "path", out_dir;
  ajl::GenConfig gc;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--shape", shape, "path|star|snowflake|fanout|quadratic-adversarial")->capture_default_str();
  gen->add_option("--atoms", gc.atoms, "Number of atoms")->capture_default_str();
  gen->add_option("--tuples,-n", gc.tuples, "Tuples per relation")->capture_default_str();
  gen->add_option("--domain", gc.domain, "Value domain size")->capture_default_str();
  gen->add_option("--dangling", gc.dangling, "Fraction of dangling tuples per non-root relation")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed (falls back to AJL_SEED, then 0)");
  gen->add_option("--out,-o", out_dir, "Output directory")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "Compare strategies on generated instances");
  std::vector<std::string> strategies{"hashjoin", "ya"}, instances;
  std::size_t reps = 3;
  std::optional<std::string> bench_json;
  ajl::BloomParams bench_bloom;
  std::optional<std::uint64_t> bench_seed;
  bench->add_option("--strategies", strategies, "Strategies to compare")->delimiter(',')->capture_default_str();
  bench->add_option("--instances,-i", instances, "Instance directories")->required();
  bench->add_option("--repetitions,-r", reps, "Repetitions per cell (at least 3)")->capture_default_str();
  bench->add_option("--seed", bench_seed, "Seed for Bloom hashing (falls back to AJL_SEED, then 0)");
  bench->add_option("--bloom-bits-per-key", bench_bloom.bits_per_key, "Bloom filter bits per key")->capture_default_str();
  bench->add_option("--bloom-hashes", bench_bloom.hashes, "Bloom filter hash count")->capture_default_str();
  bench->add_option("--json", bench_json, "Write the report as JSON");

  // emit-sql
  auto* sql = app.add_subcommand("emit-sql", "Print the SQL script for the Yannakakis rewriting");
  std::string sql_query, mode = "three-pass";
  std::optional<std::string> sql_data, sql_out;
  sql->add_option("--query,-q", sql_query, "Query file")->required();
  sql->add_option("--mode", mode, "three-pass|two-phase")
      ->check(CLI::IsMember({"three-pass", "two-phase"}))
      ->capture_default_str();
  sql->add_option("--data,-d", sql_data, "CSV directory; headers name the base columns");
  sql->add_option("--output,-o", sql_out, "Script file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    return guarded([&] {
      ajl::RunConfig cfg;
      cfg.query = query;
      cfg.data = data;
      cfg.strategy = ajl::parse_strategy(strategy);
      cfg.seed = resolve_seed(run_seed);
      cfg.bloom = bloom;
      if (!aggregate.empty()) cfg.aggregate = ajl::AggregateSpec::parse(aggregate);
      if (!groupby.empty() && !cfg.aggregate) throw ajl::ContractError("--groupby requires --aggregate");
      cfg.groupby = groupby;
      if (output) cfg.output = *output;
      if (stats_path) cfg.stats = *stats_path;
      return ajl::run(cfg);
    });
  }
  if (*gen) {
    return guarded([&] {
      gc.shape = ajl::parse_shape(shape);
      gc.seed = resolve_seed(gen_seed);
      auto inst = ajl::generate_instance(gc);
      ajl::write_instance(out_dir, inst);
      std::cout << inst.manifest.dump(2) << '\n';
      return 0;
    });
  }
  if (*bench) {
    return guarded([&] {
      ajl::BenchConfig cfg;
      for (const auto& s : strategies) cfg.strategies.push_back(ajl::parse_strategy(s));
      for (const auto& i : instances) cfg.instances.emplace_back(i);
      cfg.repetitions = reps;
      cfg.bloom = bench_bloom;
      cfg.bloom.seed = resolve_seed(bench_seed);
      auto report = ajl::bench(cfg);
      report.print_table(std::cout);
      if (bench_json) write_text(bench_json, report.to_json().dump(2) + "\n");
      return 0;
    });
  }
  return guarded([&] {
    auto q = ajl::load_query(sql_query);
    auto tree = ajl::build_join_tree(q);
    ajl::BaseColumns columns;
    if (sql_data) {
      auto db = ajl::load_csv(*sql_data, q);
      for (const auto& [name, rel] : db) columns[name] = rel.schema().names();
    }
    auto script = ajl::emit_sql_script(q, tree, mode == "two-phase" ? ajl::SqlMode::two_phase : ajl::SqlMode::three_pass,
                                       columns);
    write_text(sql_out, script.text());
    return 0;
  });
}
