#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ajl/bench.hpp"
#include "ajl/csv.hpp"
#include "ajl/errors.hpp"
#include "ajl/generator.hpp"
#include "ajl/query_parser.hpp"
#include "ajl/runner.hpp"
#include "ajl/sql_script.hpp"
#include "ajl/yannakakis.hpp"
#include "support.hpp"

namespace ajl {
namespace {

namespace fs = std::filesystem;
using test::rows_of;

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ajl_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path d1_dir() {
  auto dir = scratch("d1");
  write_file(dir / "R.csv", "a,b\n1,1\n2,2\n");
  write_file(dir / "S.csv", "a,b\n1,10\n2,20\n");
  write_file(dir / "T.csv", "a,b\n10,100\n20,200\n30,300\n");
  write_file(dir / "U.csv", "a,b\n100,7\n");
  write_file(dir / "path.cq", "# the path query\nQ(i,j,k,l,m) :- R(i,j), S(j,k),\n  T(k,l), U(l,m).\n");
  write_file(dir / "tri.cq", "Q(a,b,c) :- R(a,b), S(b,c), T(c,a).\n");
  return dir;
}

int run_cli(const std::string& args) {
  const auto cmd = std::string(AJL_BINARY) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST(ParseQuery, Examples) {
  auto q = parse_query("Q(i,m) :- R(i,j), S(j,k), T(k,l), U(l,m).");
  EXPECT_EQ(q.head(), (std::vector<std::string>{"i", "m"}));
  ASSERT_EQ(q.size(), 4u);
  EXPECT_EQ(q.atom(3), (Atom{"U", {"l", "m"}}));
  EXPECT_EQ(parse_query("Q(a) :- R(a).").size(), 1u);
  EXPECT_EQ(parse_query(format_query(q)), q);
}

TEST(ParseQuery, Errors) {
  try {
    parse_query("Q(x) :- R(x,y)");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse_query("# c\nQ(x) :-\n  R(x,,y).");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 7u);
  }
  EXPECT_THROW(parse_query("Q(z) :- R(x)."), SchemaError);
  EXPECT_THROW(parse_query("Q(x) :- R(x). extra"), SyntaxError);
  EXPECT_THROW(parse_query("Q(x) :- 1R(x)."), SyntaxError);
}

TEST(Csv, ParseQuoting) {
  auto rows = parse_csv("a,b\n\"x,y\",\"he said \"\"hi\"\"\"\r\n3,\n");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "x,y");
  EXPECT_EQ(rows[1][1], "he said \"hi\"");
  EXPECT_EQ(rows[2], (std::vector<std::string>{"3", ""}));
  EXPECT_THROW(parse_csv("a\n\"open"), SchemaError);
}

TEST(Csv, LoadD1AndErrors) {
  auto dir = d1_dir();
  auto q = load_query(dir / "path.cq");
  auto db = load_csv(dir, q);
  EXPECT_EQ(db.at("R").size(), 2u);
  EXPECT_EQ(db.at("S").size(), 2u);
  EXPECT_EQ(db.at("T").size(), 3u);
  EXPECT_EQ(db.at("U").size(), 1u);
  EXPECT_EQ(db.at("T")[0][0], Value{std::int64_t{10}});

  write_file(dir / "U.csv", "a,b\n");
  EXPECT_TRUE(load_csv(dir, q).at("U").empty());
  write_file(dir / "U.csv", "a,b,c\n1,2,3\n");
  EXPECT_THROW(load_csv(dir, q), SchemaError);
  fs::remove(dir / "U.csv");
  EXPECT_THROW(load_csv(dir, q), IoError);
}

TEST(Csv, RoundTripSortedAndQuoted) {
  auto r = test::rel({"x", "y"}, {{3, std::string("b,c")}, {1, std::string("a")}});
  std::ostringstream out;
  write_relation_csv(out, r);
  EXPECT_EQ(out.str(), "x,y\n1,a\n3,\"b,c\"\n");
}

TEST(Generator, DeterministicAndRecorded) {
  GenConfig g{Shape::snowflake, 5, 70, 20, 0.3, 9};
  auto a = generate_instance(g);
  auto b = generate_instance(g);
  EXPECT_EQ(a.query, b.query);
  for (const auto& [name, rel] : a.db) EXPECT_EQ(rel.sorted_rows(), b.db.at(name).sorted_rows());
  EXPECT_EQ(a.manifest, b.manifest);
  EXPECT_EQ(a.manifest["shape"], "snowflake");
  EXPECT_THROW(parse_shape("cycle"), ContractError);
}

TEST(Generator, DanglingFractionIsDropped) {
  auto inst = generate_instance(GenConfig{Shape::path, 4, 100, 50, 0.5, 1});
  const auto& q = inst.query;
  auto atoms = bind_atoms(q, inst.db);
  auto t = build_join_tree(q);
  OpStats st;
  auto reduced = full_reduce(q, atoms, t, st);
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (a == t.root()) continue;
    const double dropped = static_cast<double>(atoms[a].size() - reduced[a].size()) / static_cast<double>(atoms[a].size());
    EXPECT_GE(dropped, 0.4) << "atom " << a;
  }
}

TEST(Generator, NoDanglingMeansNoDropsOrDeletions) {
  for (auto shape : {Shape::path, Shape::star, Shape::snowflake, Shape::fanout}) {
    auto inst = generate_instance(GenConfig{shape, 4, 60, 15, 0.0, 4});
    auto atoms = bind_atoms(inst.query, inst.db);
    for (auto s : all_strategies()) {
      auto e = execute(s, inst.query, atoms);
      EXPECT_EQ(e.stats.semijoin_drops, 0u) << strategy_name(s);
      EXPECT_EQ(e.stats.ttj_deletions, 0u) << strategy_name(s);
    }
  }
}

TEST(Generator, QuadraticManifest) {
  auto inst = generate_instance(GenConfig{Shape::quadratic_adversarial, 3, 512, 1, 0.0, 0});
  EXPECT_GE(inst.manifest["intermediate_lower_bound"].get<std::uint64_t>(), 131072u);
  EXPECT_EQ(inst.manifest["expected_output"].get<std::int64_t>(), 512);
  EXPECT_EQ(test::reference_join(inst.query, inst.db).size(), 512u);
}

TEST(Generator, WritesLoadableFiles) {
  auto dir = scratch("gen");
  auto inst = generate_instance(GenConfig{Shape::star, 3, 30, 10, 0.3, 2});
  write_instance(dir, inst);
  auto q = load_query(dir / "query.cq");
  EXPECT_EQ(q, inst.query);
  auto db = load_csv(dir, q);
  for (const auto& [name, rel] : inst.db) EXPECT_EQ(db.at(name).sorted_rows(), rel.sorted_rows());
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
}

TEST(SqlScript, PathThreePassMirrorsTheSequence) {
  auto q = test::path_query();
  auto s = emit_sql_script(q, build_join_tree(q), SqlMode::three_pass);
  ASSERT_EQ(s.statements.size(), 9u);
  const std::vector<std::string> prefixes{"CREATE TEMP TABLE T_2_up",   "CREATE TEMP TABLE S_1_up",
                                          "CREATE TEMP TABLE R_0_up",   "CREATE TEMP TABLE S_1_down",
                                          "CREATE TEMP TABLE T_2_down", "CREATE TEMP TABLE U_3_down",
                                          "CREATE TEMP TABLE Q1",       "CREATE TEMP TABLE Q2",
                                          "SELECT DISTINCT"};
  for (std::size_t i = 0; i < prefixes.size(); ++i) EXPECT_EQ(s.statements[i].rfind(prefixes[i], 0), 0u) << i;
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NE(s.statements[i].find("WHERE EXISTS"), std::string::npos);
  // R is reduced by S', not by T'.
  EXPECT_NE(s.statements[2].find("FROM S_1_up"), std::string::npos);
}

TEST(SqlScript, TwoPhaseAndSingleAtom) {
  auto q = test::path_query();
  EXPECT_EQ(emit_sql_script(q, build_join_tree(q), SqlMode::two_phase).statements.size(), 6u);
  Query one({"a"}, {{"R", {"a", "b"}}});
  auto s = emit_sql_script(one, build_join_tree(one), SqlMode::three_pass);
  ASSERT_EQ(s.statements.size(), 1u);
  EXPECT_EQ(s.statements[0].rfind("SELECT DISTINCT", 0), 0u);
  EXPECT_THROW(build_join_tree(test::triangle_query()), AcyclicityError);
}

TEST(SqlScript, StatementCountsOnRandomTrees) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = generate_instance(test::random_config(seed));
    const auto n = inst.query.size();
    for (const auto& t : enumerate_join_trees(inst.query)) {
      EXPECT_EQ(emit_sql_script(inst.query, t, SqlMode::three_pass).statements.size(), n == 1 ? 1 : 3 * (n - 1));
      EXPECT_EQ(emit_sql_script(inst.query, t, SqlMode::two_phase).statements.size(), n == 1 ? 1 : 2 * (n - 1));
    }
  }
}

TEST(Runner, EveryStrategyMatchesReference) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = generate_instance(test::random_config(seed));
    auto atoms = bind_atoms(inst.query, inst.db);
    const auto expected = test::reference_join(inst.query, atoms);
    for (auto s : all_strategies()) {
      auto e = execute(s, inst.query, atoms, BloomParams{8.0, 6, seed});
      EXPECT_EQ(rows_of(e.output, inst.query.head()), expected) << strategy_name(s) << " seed " << seed;
      EXPECT_EQ(e.stats.output_tuples, e.output.size());
    }
  }
}

TEST(Runner, StrategyAndAggregateNames) {
  for (auto s : all_strategies()) EXPECT_EQ(parse_strategy(strategy_name(s)), s);
  EXPECT_THROW(parse_strategy("magic"), ContractError);
  EXPECT_EQ(AggregateSpec::parse("sum:m").column(), "sum_m");
  EXPECT_EQ(AggregateSpec::parse("min:x").kind, AggregateKind::min);
  EXPECT_THROW(AggregateSpec::parse("avg:x"), ContractError);
  EXPECT_THROW(AggregateSpec::parse("sum:"), ContractError);
}

TEST(Runner, AggregateUsesZeroMaWhenPossible) {
  auto q = test::path_query();
  auto atoms = bind_atoms(q, test::d1());
  std::vector<std::string> gi{"i"};
  auto e = execute_aggregate(Strategy::ya, q, atoms, AggregateSpec::parse("count"), gi);
  EXPECT_TRUE(e.zero_ma);
  EXPECT_EQ(e.stats.tuples_materialized, 0u);
  EXPECT_EQ(rows_of(e.output, {"i", "count"}), (std::set<Tuple>{{1, 1}}));
  std::vector<std::string> im{"i", "m"};
  auto f = execute_aggregate(Strategy::ya2, q, atoms, AggregateSpec::parse("sum:m"), im);
  EXPECT_FALSE(f.zero_ma);
  EXPECT_EQ(rows_of(f.output, {"i", "m", "sum_m"}), (std::set<Tuple>{{1, 7, 7}}));
  EXPECT_THROW(execute_aggregate(Strategy::pt, q, atoms, AggregateSpec::parse("count"), gi), ContractError);
}

TEST(Runner, StatsJsonShape) {
  auto q = test::path_query();
  auto e = execute(Strategy::ya, q, bind_atoms(q, test::d1()));
  auto j = stats_json(Strategy::ya, e, 5);
  EXPECT_EQ(j["strategy"], "ya");
  EXPECT_EQ(j["output_size"], 1);
  for (auto key : {"hash_build_inserts", "hash_probes", "probe_misses", "tuples_materialized", "semijoin_drops",
                   "ttj_deletions"}) {
    EXPECT_TRUE(j["counters"].contains(key)) << key;
  }
  EXPECT_TRUE(j["phase_ms"].contains("reduce"));
  EXPECT_EQ(j["join_tree"]["root"], 0);
  EXPECT_EQ(j["seed"], 5);
}

TEST(Bench, ReportsRatios) {
  auto root = scratch("bench");
  std::vector<fs::path> dirs;
  for (std::uint64_t s = 0; s < 2; ++s) {
    auto dir = root / ("inst" + std::to_string(s));
    write_instance(dir, generate_instance(GenConfig{Shape::path, 4, 200, 100, 0.0, s}));
    dirs.push_back(dir);
  }
  BenchConfig cfg{{Strategy::ya, Strategy::ttj, Strategy::hashjoin}, dirs, 3, {}};
  auto report = bench(cfg);
  ASSERT_EQ(report.rows.size(), 6u);
  std::uint64_t hj_probes = 0;
  for (const auto& r : report.rows) {
    if (r.strategy == Strategy::hashjoin) {
      hj_probes = r.stats.hash_probes;
      EXPECT_DOUBLE_EQ(*r.work_ratio, 1.0);
    }
  }
  for (const auto& r : report.rows) {
    if (r.strategy == Strategy::ya) EXPECT_GT(*r.work_ratio, 1.0);
    if (r.strategy == Strategy::ttj) EXPECT_LE(r.stats.hash_probes, hj_probes);
  }
  std::ostringstream table;
  report.print_table(table);
  EXPECT_NE(table.str().find("work/hj"), std::string::npos);

  auto single = bench(BenchConfig{{Strategy::nested}, {dirs[0]}, 1, {}});
  EXPECT_EQ(single.rows.size(), 1u);
  EXPECT_EQ(single.repetitions, 3u);
  EXPECT_EQ(single.to_json()["rows"].size(), 1u);
}

TEST(Binary, RunMatchesOracleByteForByte) {
  auto dir = d1_dir();
  const auto q = (dir / "path.cq").string();
  ASSERT_EQ(run_cli("run -q " + q + " -d " + dir.string() + " -s oracle -o " + (dir / "oracle.csv").string()), 0);
  for (auto s : {"hashjoin", "ya", "ya2", "yaplus", "pt", "rpt", "ttj", "nested"}) {
    const auto out = dir / (std::string(s) + ".csv");
    ASSERT_EQ(run_cli("run -q " + q + " -d " + dir.string() + " -s " + s + " -o " + out.string() + " --stats " +
                      (dir / (std::string(s) + ".json")).string()),
              0);
    EXPECT_EQ(read_file(out), read_file(dir / "oracle.csv")) << s;
  }
  EXPECT_EQ(read_file(dir / "oracle.csv"), "i,j,k,l,m\n1,1,10,100,7\n");
  auto stats = nlohmann::json::parse(read_file(dir / "ya.json"));
  EXPECT_EQ(stats["output_size"], 1);
}

TEST(Binary, ExitCodes) {
  auto dir = d1_dir();
  EXPECT_EQ(run_cli("run -q " + (dir / "tri.cq").string() + " -d " + dir.string() + " -s ya"), 2);
  EXPECT_EQ(run_cli("run -q " + (dir / "tri.cq").string() + " -d " + dir.string() + " -s oracle"), 0);
  EXPECT_EQ(run_cli("run -q " + (dir / "missing.cq").string() + " -d " + dir.string()), 3);
  EXPECT_EQ(run_cli("run -q " + (dir / "path.cq").string() + " -d " + (dir / "nope").string()), 3);
  EXPECT_EQ(run_cli("run -q " + (dir / "path.cq").string() + " -d " + dir.string() + " -s bogus"), 1);
  EXPECT_EQ(run_cli("emit-sql -q " + (dir / "tri.cq").string()), 2);
}

TEST(Binary, DeterministicStatsAndSeedFallback) {
  auto dir = d1_dir();
  auto gen = dir / "gen";
  ASSERT_EQ(run_cli("gen --shape star --atoms 4 -n 80 --domain 30 --dangling 0.3 --seed 3 -o " + gen.string()), 0);
  auto strip = [](nlohmann::json j) {
    j.erase("phase_ms");
    return j;
  };
  const auto base = "run -q " + (gen / "query.cq").string() + " -d " + gen.string() + " -s pt ";
  ASSERT_EQ(run_cli(base + "-o " + (dir / "a.csv").string() + " --stats " + (dir / "a.json").string()), 0);
  ASSERT_EQ(run_cli(base + "-o " + (dir / "b.csv").string() + " --stats " + (dir / "b.json").string()), 0);
  EXPECT_EQ(read_file(dir / "a.csv"), read_file(dir / "b.csv"));
  EXPECT_EQ(strip(nlohmann::json::parse(read_file(dir / "a.json"))),
            strip(nlohmann::json::parse(read_file(dir / "b.json"))));

  ::setenv("AJL_SEED", "41", 1);
  ASSERT_EQ(run_cli(base + "-o " + (dir / "c.csv").string() + " --stats " + (dir / "c.json").string()), 0);
  ::unsetenv("AJL_SEED");
  EXPECT_EQ(nlohmann::json::parse(read_file(dir / "c.json"))["seed"], 41);
}

TEST(Binary, BenchAndEmitSql) {
  auto dir = d1_dir();
  auto gen = dir / "g";
  ASSERT_EQ(run_cli("gen --shape path --atoms 3 -n 50 --domain 25 --seed 1 -o " + gen.string()), 0);
  ASSERT_EQ(run_cli("bench --strategies ya,hashjoin -i " + gen.string() + " --json " + (dir / "bench.json").string()), 0);
  auto report = nlohmann::json::parse(read_file(dir / "bench.json"));
  EXPECT_EQ(report["rows"].size(), 2u);
  ASSERT_EQ(run_cli("emit-sql -q " + (dir / "path.cq").string() + " --mode two-phase -d " + dir.string() + " -o " +
                    (dir / "q.sql").string()),
            0);
  EXPECT_NE(read_file(dir / "q.sql").find("\"a\" AS \"i\""), std::string::npos);
}

TEST(Binary, AggregateFlags) {
  auto dir = d1_dir();
  ASSERT_EQ(run_cli("run -q " + (dir / "path.cq").string() + " -d " + dir.string() +
                    " --aggregate count --groupby l,m -o " + (dir / "agg.csv").string() + " --stats " +
                    (dir / "agg.json").string()),
            0);
  EXPECT_EQ(read_file(dir / "agg.csv"), "l,m,count\n100,7,1\n");
  EXPECT_EQ(nlohmann::json::parse(read_file(dir / "agg.json"))["zero_ma"], true);
  EXPECT_EQ(run_cli("run -q " + (dir / "path.cq").string() + " -d " + dir.string() + " -s ttj --aggregate count"), 1);
}

}  // namespace
}  // namespace ajl
