#include <gtest/gtest.h>

#include <map>
#include <random>

#include "ajl/aggregates.hpp"
#include "ajl/errors.hpp"
#include "support.hpp"

namespace ajl {
namespace {

using test::rel;

const JoinTree kChain(0, {-1, 0, 1, 2});

template <class S>
void check_semiring_laws(const std::vector<typename S::value_type>& xs) {
  for (auto a : xs) {
    EXPECT_EQ(S::plus(a, S::zero()), a);
    EXPECT_EQ(S::times(a, S::one()), a);
    EXPECT_EQ(S::times(a, S::zero()), S::zero());
    for (auto b : xs) {
      EXPECT_EQ(S::plus(a, b), S::plus(b, a));
      for (auto c : xs) {
        EXPECT_EQ(S::plus(S::plus(a, b), c), S::plus(a, S::plus(b, c)));
        EXPECT_EQ(S::times(S::times(a, b), c), S::times(a, S::times(b, c)));
        EXPECT_EQ(S::times(a, S::plus(b, c)), S::plus(S::times(a, b), S::times(a, c)));
      }
    }
  }
}

TEST(Semiring, Laws) {
  check_semiring_laws<CountingSemiring>({0, 1, 2, 7, 1000});
  check_semiring_laws<SumProductSemiring>({-3, 0, 1, 5, 12});
  check_semiring_laws<MinPlusSemiring>({0, 1, 4, -2, MinPlusSemiring::infinity()});
}

// Independent COUNT: group the reference join's full assignments.
std::map<Tuple, std::uint64_t> reference_count(const Query& q, const std::vector<Relation>& atoms,
                                               const std::vector<std::string>& groupby) {
  const auto vars = q.variables();
  std::map<Tuple, std::uint64_t> out;
  for (const auto& t : test::reference_join(q.full(), atoms)) {
    Tuple key;
    for (const auto& g : groupby) key.push_back(t[static_cast<std::size_t>(std::find(vars.begin(), vars.end(), g) - vars.begin())]);
    ++out[key];
  }
  return out;
}

TEST(Annotate, Examples) {
  auto u = rel({"l", "m"}, {{100, 7}});
  auto ones = annotate<CountingSemiring>(u, {});
  EXPECT_EQ(ones.annotations, (std::vector<std::uint64_t>{1}));
  auto sum = annotate<SumProductSemiring>(u, AnnotationRule::lift_attribute("m"));
  EXPECT_EQ(sum.annotations, (std::vector<std::int64_t>{7}));
  EXPECT_THROW(annotate<SumProductSemiring>(u, AnnotationRule::lift_attribute("zz")), SchemaError);
}

TEST(Annotate, JoinWithAllOnesPreservesAnnotations) {
  auto r = annotate<SumProductSemiring>(rel({"a", "v"}, {{1, 3}, {2, 5}}), AnnotationRule::lift_attribute("v"));
  auto ones = annotate<SumProductSemiring>(rel({"a"}, {{1}, {2}}), {});
  OpStats st;
  auto joined = absorb_child<SumProductSemiring>(r, ones, st);
  EXPECT_EQ(joined.as_map(), r.as_map());
}

TEST(YaAggregate, DeskCounts) {
  const auto q = test::path_query();
  std::vector<std::string> gi{"i"};
  OpStats st;
  auto a = ya_aggregate<CountingSemiring>(q, test::d1(), kChain, gi, st);
  EXPECT_EQ(a.as_map(), (std::map<Tuple, std::uint64_t>{{{1}, 1}}));

  auto db = test::d1();
  db["U"] = rel({"a", "b"}, {{100, 7}, {100, 8}});
  OpStats st2;
  EXPECT_EQ(ya_aggregate<CountingSemiring>(q, db, kChain, gi, st2).as_map(),
            (std::map<Tuple, std::uint64_t>{{{1}, 2}}));

  db["R"] = Relation(Schema{"a", "b"});
  EXPECT_EQ(ya_aggregate<CountingSemiring>(q, db, kChain, gi, st2).size(), 0u);
}

TEST(YaAggregate, GroupByMustBeInHead) {
  auto q = test::path_query().with_head({"i"});
  std::vector<std::string> gm{"m"};
  OpStats st;
  EXPECT_THROW(ya_aggregate<CountingSemiring>(q, test::d1(), kChain, gm, st), ContractError);
}

TEST(YaAggregate, SumAndMin) {
  const auto q = test::path_query();
  auto db = test::d1();
  db["U"] = rel({"a", "b"}, {{100, 7}, {100, 8}});
  std::vector<std::string> gi{"i"};
  OpStats st;
  auto sum = ya_aggregate<SumProductSemiring>(q, db, kChain, gi, st, AnnotationRule::lift_attribute("m"));
  EXPECT_EQ(sum.as_map(), (std::map<Tuple, std::int64_t>{{{1}, 15}}));
  auto mn = ya_aggregate<MinPlusSemiring>(q, db, kChain, gi, st, AnnotationRule::lift_attribute("m"));
  EXPECT_EQ(mn.as_map(), (std::map<Tuple, std::int64_t>{{{1}, 7}}));
}

TEST(ZeroMa, DeskExamples) {
  const auto q = test::path_query();
  std::vector<std::string> gi{"i"};
  OpStats zs, ys;
  auto z = zero_ma_aggregate<CountingSemiring>(q, test::d1(), kChain, gi, zs);
  EXPECT_EQ(z.as_map(), ya_aggregate<CountingSemiring>(q, test::d1(), kChain, gi, ys).as_map());
  EXPECT_EQ(zs.tuples_materialized, 0u);

  std::vector<std::string> lm{"l", "m"};
  OpStats s2;
  EXPECT_EQ(zero_ma_aggregate<CountingSemiring>(q, test::d1(), kChain, lm, s2).as_map(),
            (std::map<Tuple, std::uint64_t>{{{100, 7}, 1}}));
  EXPECT_EQ(s2.tuples_materialized, 0u);

  std::vector<std::string> im{"i", "m"};
  EXPECT_THROW(zero_ma_aggregate<CountingSemiring>(q, test::d1(), kChain, im, s2), NotZeroMaError);
}

TEST(Aggregates, RandomInstancesMatchReferenceCount) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto inst = generate_instance(test::random_config(seed, 60));
    const auto& q = inst.query;
    const auto atoms = bind_atoms(q, inst.db);
    const auto vars = q.variables();
    std::vector<std::string> groupby;
    for (const auto& v : vars) {
      if (rng() % 3 == 0) groupby.push_back(v);
    }
    const auto want = reference_count(q, atoms, groupby);
    const auto trees = enumerate_join_trees(q);
    for (const auto& t : trees) {
      OpStats st;
      auto got = ya_aggregate<CountingSemiring>(q, atoms, t, groupby, st);
      EXPECT_EQ(got.as_map(groupby), want) << "seed " << seed;
    }
    EXPECT_EQ(oracle_aggregate<CountingSemiring>(q, atoms, groupby).as_map(groupby), want);
    if (dominating_atom(q, groupby)) {
      OpStats zs, ys;
      auto z = zero_ma_aggregate<CountingSemiring>(q, atoms, trees.front(), groupby, zs);
      EXPECT_EQ(z.as_map(groupby), ya_aggregate<CountingSemiring>(q, atoms, trees.front(), groupby, ys).as_map(groupby));
      EXPECT_EQ(zs.tuples_materialized, 0u);
    }
  }
}

}  // namespace
}  // namespace ajl
