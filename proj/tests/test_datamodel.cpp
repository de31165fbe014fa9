#include <gtest/gtest.h>

#include "ajl/algebra.hpp"
#include "ajl/errors.hpp"
#include "ajl/op_stats.hpp"
#include "support.hpp"

namespace ajl {
namespace {

using test::rel;
using test::rows_of;

TEST(Value, IntegersOrderBeforeStrings) {
  EXPECT_LT(Value{std::int64_t{999}}, Value{std::string("0")});
  EXPECT_LT(Value{std::int64_t{-5}}, Value{std::int64_t{3}});
  EXPECT_EQ(hash_value(Value{std::string("x")}), hash_value(Value{std::string("x")}));
  EXPECT_NE(hash_value(Value{std::int64_t{1}}), hash_value(Value{std::string("1")}));
}

TEST(Value, ParseField) {
  EXPECT_EQ(parse_field("42"), Value{std::int64_t{42}});
  EXPECT_EQ(parse_field("007"), Value{std::int64_t{7}});
  EXPECT_EQ(parse_field("-3"), Value{std::string("-3")});
  EXPECT_EQ(parse_field(""), Value{std::string("")});
  EXPECT_EQ(parse_field("12a"), Value{std::string("12a")});
  EXPECT_EQ(parse_field("99999999999999999999"), Value{std::string("99999999999999999999")});
}

TEST(Schema, RejectsDuplicatesAndEmptyNames) {
  EXPECT_THROW(Schema({"a", "a"}), SchemaError);
  EXPECT_THROW(Schema({"a", ""}), SchemaError);
  Schema s{"x", "y"};
  EXPECT_EQ(s.index_of("y"), 1u);
  EXPECT_THROW((void)s.index_of("z"), SchemaError);
}

TEST(Relation, SetSemanticsAndArity) {
  auto r = rel({"a", "b"}, {{1, 2}, {1, 2}, {3, 4}});
  EXPECT_EQ(r.size(), 2u);
  EXPECT_THROW(rel({"a", "b"}, {{1}}), SchemaError);
}

TEST(Relation, SameContentsIgnoresColumnOrder) {
  auto a = rel({"x", "y"}, {{1, 2}, {3, 4}});
  auto b = rel({"y", "x"}, {{4, 3}, {2, 1}});
  EXPECT_TRUE(same_contents(a, b));
  EXPECT_FALSE(same_contents(a, rel({"x", "z"}, {{1, 2}, {3, 4}})));
}

TEST(Project, Examples) {
  auto r = rel({"i", "j"}, {{1, 1}, {2, 2}});
  EXPECT_EQ(rows_of(project(r, {"i"}), {"i"}), (std::set<Tuple>{{1}, {2}}));
  EXPECT_TRUE(same_contents(project(r, {"i", "j"}), r));
  auto s = rel({"j", "k"}, {{1, 10}, {2, 10}});
  auto p = project(s, {"k"});
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0], (Tuple{10}));
  EXPECT_THROW(project(r, {"zz"}), SchemaError);
}

TEST(Semijoin, DeskExamples) {
  auto t = rel({"k", "l"}, {{10, 100}, {20, 200}, {30, 300}});
  auto u = rel({"l", "m"}, {{100, 7}});
  OpStats st;
  auto t1 = semijoin(t, u, &st);
  EXPECT_EQ(rows_of(t1, {"k", "l"}), (std::set<Tuple>{{10, 100}}));
  EXPECT_EQ(st.semijoin_drops, 2u);
  EXPECT_EQ(st.hash_probes, 3u);
  EXPECT_EQ(st.hash_build_inserts, 1u);
  EXPECT_LE(st.probe_misses, st.hash_probes);

  EXPECT_TRUE(same_contents(semijoin(t, t), t));
  auto s = rel({"j", "k"}, {{1, 10}, {2, 20}});
  auto s1 = semijoin(s, rel({"k", "l"}, {{10, 100}}));
  EXPECT_EQ(rows_of(s1, {"j", "k"}), (std::set<Tuple>{{1, 10}}));
}

TEST(Semijoin, NoSharedAttributes) {
  auto a = rel({"x"}, {{1}, {2}});
  EXPECT_TRUE(same_contents(semijoin(a, rel({"y"}, {{5}})), a));
  EXPECT_TRUE(semijoin(a, Relation(Schema{"y"})).empty());
}

TEST(NaturalJoin, Examples) {
  auto ts = rel({"k", "l"}, {{10, 100}});
  auto us = rel({"l", "m"}, {{100, 7}});
  auto q1 = natural_join(ts, us);
  EXPECT_EQ(q1.schema().names(), (std::vector<std::string>{"k", "l", "m"}));
  EXPECT_EQ(rows_of(q1, {"k", "l", "m"}), (std::set<Tuple>{{10, 100, 7}}));
  EXPECT_TRUE(natural_join(ts, Relation(Schema{"l", "m"})).empty());
  auto r = rel({"i", "j"}, {{1, 1}, {2, 2}});
  auto s = rel({"j", "k"}, {{1, 10}, {2, 20}});
  EXPECT_EQ(rows_of(natural_join(r, s), {"i", "j", "k"}), (std::set<Tuple>{{1, 1, 10}, {2, 2, 20}}));
}

TEST(NaturalJoin, CommutativeAndBounded) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenConfig g{Shape::path, 2, 30 + seed, 6, 0.2, seed};
    auto inst = generate_instance(g);
    auto atoms = bind_atoms(inst.query, inst.db);
    auto lr = natural_join(atoms[0], atoms[1]);
    auto rl = natural_join(atoms[1], atoms[0]);
    EXPECT_TRUE(same_contents(lr, rl));
    EXPECT_LE(lr.size(), atoms[0].size() * atoms[1].size());
    auto sj = semijoin(atoms[0], atoms[1]);
    EXPECT_LE(sj.size(), atoms[0].size());
    EXPECT_TRUE(same_contents(semijoin(sj, atoms[1]), sj));
  }
}

TEST(Query, Invariants) {
  EXPECT_THROW(Query({"z"}, {{"R", {"a"}}}), SchemaError);
  EXPECT_THROW(Query({"a"}, {{"R", {"a", "a"}}}), SchemaError);
  EXPECT_THROW(Query({"a"}, {}), SchemaError);
  auto q = test::path_query();
  EXPECT_EQ(q.variables(), (std::vector<std::string>{"i", "j", "k", "l", "m"}));
}

TEST(BindAtoms, Errors) {
  auto q = test::path_query();
  Database db = test::d1();
  db.erase("U");
  EXPECT_THROW(bind_atoms(q, db), ContractError);
  db.emplace("U", rel({"a", "b", "c"}, {}));
  EXPECT_THROW(bind_atoms(q, db), SchemaError);
}

TEST(OracleJoin, DeskInstance) {
  auto out = oracle_join(test::path_query(), test::d1());
  EXPECT_EQ(rows_of(out, {"i", "j", "k", "l", "m"}), (std::set<Tuple>{{1, 1, 10, 100, 7}}));
  EXPECT_EQ(rows_of(out, {"i", "j", "k", "l", "m"}), test::reference_join(test::path_query(), test::d1()));
}

TEST(OracleJoin, EmptyRelationAndTriangle) {
  auto db = test::d1();
  db["U"] = Relation(Schema{"a", "b"});
  EXPECT_TRUE(oracle_join(test::path_query(), db).empty());

  Database tri;
  for (auto n : {"R", "S", "T"}) tri.emplace(n, rel({"x", "y"}, {{1, 1}}));
  auto out = oracle_join(test::triangle_query(), tri);
  EXPECT_EQ(rows_of(out, {"a", "b", "c"}), (std::set<Tuple>{{1, 1, 1}}));
}

TEST(OracleJoin, MatchesReferenceOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = generate_instance(test::random_config(seed, 60));
    auto out = oracle_join(inst.query, inst.db);
    EXPECT_EQ(rows_of(out, inst.query.head()), test::reference_join(inst.query, inst.db)) << "seed " << seed;
  }
}

TEST(OracleJoin, SelfJoinAndProjection) {
  Query q({"x", "z"}, {{"E", {"x", "y"}}, {"E", {"y", "z"}}});
  Database db;
  db.emplace("E", rel({"s", "d"}, {{1, 2}, {2, 3}, {3, 1}}));
  auto out = oracle_join(q, db);
  EXPECT_EQ(rows_of(out, {"x", "z"}), (std::set<Tuple>{{1, 3}, {2, 1}, {3, 2}}));
}

TEST(OpStats, TotalAndAccumulate) {
  OpStats a;
  a.hash_build_inserts = 1;
  a.hash_probes = 2;
  a.probe_misses = 1;
  a.tuples_materialized = 3;
  a.semijoin_drops = 4;
  a.ttj_deletions = 5;
  a.output_tuples = 6;
  EXPECT_EQ(a.total(), 15u);
  OpStats b;
  b += a;
  b += a;
  EXPECT_EQ(b.total(), 30u);
}

}  // namespace
}  // namespace ajl
