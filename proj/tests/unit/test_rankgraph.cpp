#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"
#include "rankcount/rankgraph.hpp"
#include "rankcount/rng.hpp"
#include "test_support.hpp"

using namespace rankcount;
using rankcount::testing::TempDir;

namespace {

std::string vid(std::size_t k) { return "v" + std::to_string(k); }

// Reachability by Floyd-Warshall over an explicit arc list.
std::set<std::pair<std::string, std::string>> floyd_warshall(std::size_t n,
                                                           const std::vector<std::pair<std::size_t, std::size_t>>& arcs) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (auto [a, b] : arcs) r[a][b] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  std::set<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (r[i][j]) out.emplace(vid(i), vid(j));
  return out;
}

// Random DAG: arcs only from lower to higher rank in a hidden permutation.
std::vector<std::pair<std::size_t, std::size_t>> random_dag(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t e = 0; e < m; ++e) {
    auto a = rng.index(n);
    auto b = rng.index(n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    arcs.emplace_back(order[a], order[b]);
  }
  return arcs;
}

std::set<std::pair<std::string, std::string>> as_set(const std::vector<RankingPair>& pairs) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& p : pairs) out.emplace(p.hi, p.lo);
  return out;
}

void add_ok(RankGraph& g, const std::string& i, const std::string& j, int q = 1) {
  ASSERT_FALSE(g.add_pair(i, j, q).has_value()) << i << " " << j;
}

}  // namespace

TEST(RankingPair, NegativeLabelIsNormalized) {
  const auto p = make_ranking_pair("a", "b", -1);
  EXPECT_EQ(p.hi, "b");
  EXPECT_EQ(p.lo, "a");
  EXPECT_THROW(make_ranking_pair("a", "a", 1), DomainError);
  EXPECT_THROW(make_ranking_pair("a", "b", 0), DomainError);
}

TEST(RankGraph, SingleInsertionCreatesArc) {
  RankGraph g;
  add_ok(g, "A", "B");
  EXPECT_EQ(g.arc_count(), 1u);
  EXPECT_EQ(g.query_relation("A", "B"), Relation::i_higher);
}

TEST(RankGraph, ReverseOfExistingArcConflicts) {
  RankGraph g;
  add_ok(g, "A", "B");
  const auto conflict = g.add_pair("A", "B", -1);
  ASSERT_TRUE(conflict.has_value());
  EXPECT_EQ(conflict->witness, (std::vector<std::string>{"A", "B"}));
}

TEST(RankGraph, CycleClosingJudgmentConflictsWithPath) {
  RankGraph g;
  add_ok(g, "A", "B");
  add_ok(g, "B", "C");
  const auto conflict = g.add_pair("C", "A", 1);
  ASSERT_TRUE(conflict.has_value());
  EXPECT_EQ(conflict->witness, (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(g.arc_count(), 2u);
  EXPECT_EQ(g.transitive_closure().size(), 3u);
}

TEST(RankGraph, SelfPairIsRejected) {
  RankGraph g;
  EXPECT_THROW((void)g.add_pair("A", "A", 1), DomainError);
}

TEST(RankGraph, ChainClosureMarksImpliedPair) {
  RankGraph g;
  add_ok(g, "A", "B");
  add_ok(g, "B", "C");
  const auto closure = g.transitive_closure();
  ASSERT_EQ(closure.size(), 3u);
  EXPECT_EQ(closure[0], (RankingPair{"A", "B", Provenance::manual}));
  EXPECT_EQ(closure[1], (RankingPair{"A", "C", Provenance::implied}));
  EXPECT_EQ(closure[2], (RankingPair{"B", "C", Provenance::manual}));
}

TEST(RankGraph, EmptyGraphHasEmptyClosure) {
  RankGraph g;
  EXPECT_TRUE(g.transitive_closure().empty());
  EXPECT_EQ(g.label_stats(), (LabelStats{0, 0, 0}));
}

TEST(RankGraph, QueryRelationExamples) {
  RankGraph g;
  add_ok(g, "A", "B");
  add_ok(g, "B", "C");
  EXPECT_EQ(g.query_relation("A", "C"), Relation::i_higher);
  EXPECT_EQ(g.query_relation("A", "D"), Relation::unknown);
  EXPECT_EQ(g.query_relation("B", "A"), Relation::j_higher);
  EXPECT_THROW((void)g.query_relation("A", "A"), DomainError);
}

TEST(RankGraph, LabelStatsExamples) {
  RankGraph chain;
  add_ok(chain, "A", "B");
  add_ok(chain, "B", "C");
  EXPECT_EQ(chain.label_stats(), (LabelStats{2, 1, 3}));

  RankGraph star;
  add_ok(star, "hub", "B");
  add_ok(star, "hub", "C");
  add_ok(star, "hub", "D");
  EXPECT_EQ(star.label_stats(), (LabelStats{3, 0, 3}));
}

TEST(RankGraph, ReassertingImpliedPairMakesItManual) {
  RankGraph g;
  add_ok(g, "A", "B");
  add_ok(g, "B", "C");
  add_ok(g, "A", "C");
  EXPECT_EQ(g.label_stats(), (LabelStats{3, 0, 3}));
  add_ok(g, "A", "C");
  EXPECT_EQ(g.arc_count(), 3u);
}

TEST(RankGraph, ClosureMatchesFloydWarshallOnRandomDags) {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.index(60);
    const auto arcs = random_dag(rng, n, rng.index(3 * n));
    RankGraph g;
    for (auto [a, b] : arcs) ASSERT_FALSE(g.add_pair(vid(a), vid(b), 1).has_value());
    EXPECT_EQ(as_set(g.transitive_closure()), floyd_warshall(n, arcs)) << "trial " << trial;
  }
}

TEST(RankGraph, ClosureIsInsertionOrderIndependent) {
  Rng rng(99);
  auto arcs = random_dag(rng, 40, 120);
  RankGraph a;
  for (auto [x, y] : arcs) ASSERT_FALSE(a.add_pair(vid(x), vid(y), 1).has_value());
  rng.shuffle(std::span(arcs));
  RankGraph b;
  for (auto [x, y] : arcs) ASSERT_FALSE(b.add_pair(vid(y), vid(x), -1).has_value());
  EXPECT_EQ(a.transitive_closure(), b.transitive_closure());
}

TEST(RankGraph, ClosureIsIdempotent) {
  Rng rng(5);
  const auto arcs = random_dag(rng, 30, 80);
  RankGraph g;
  for (auto [x, y] : arcs) ASSERT_FALSE(g.add_pair(vid(x), vid(y), 1).has_value());
  const auto closure = g.transitive_closure();
  RankGraph h;
  for (const auto& p : closure) ASSERT_FALSE(h.add_pair(p).has_value());
  EXPECT_EQ(as_set(h.transitive_closure()), as_set(closure));
}

TEST(RankGraph, RejectedInsertionsNeverCreateTwoWayOrder) {
  Rng rng(17);
  RankGraph g;
  for (int step = 0; step < 400; ++step) {
    const auto a = vid(rng.index(25));
    const auto b = vid(rng.index(25));
    if (a == b) continue;
    const auto before = g.transitive_closure();
    if (auto conflict = g.add_pair(a, b, rng.index(2) == 0 ? 1 : -1)) {
      EXPECT_EQ(g.transitive_closure(), before);
    }
  }
  for (std::size_t x = 0; x < 25; ++x)
    for (std::size_t y = 0; y < 25; ++y) {
      if (x == y) continue;
      const auto r1 = g.query_relation(vid(x), vid(y));
      const auto r2 = g.query_relation(vid(y), vid(x));
      EXPECT_FALSE(r1 == Relation::i_higher && r2 == Relation::i_higher);
    }
}

TEST(RankGraph, LabelStatsAlwaysSumUp) {
  Rng rng(8);
  RankGraph g;
  for (int step = 0; step < 200; ++step) {
    const auto a = vid(rng.index(30));
    const auto b = vid(rng.index(30));
    if (a == b) continue;
    (void)g.add_pair(a, b, 1);
    const auto s = g.label_stats();
    ASSERT_EQ(s.manual + s.implied, s.total);
    ASSERT_EQ(s.total, g.transitive_closure().size());
  }
}

TEST(RankGraph, CopyIsIndependent) {
  RankGraph g;
  add_ok(g, "A", "B");
  RankGraph copy = g;
  add_ok(copy, "B", "C");
  EXPECT_EQ(g.transitive_closure().size(), 1u);
  EXPECT_EQ(copy.transitive_closure().size(), 3u);
}

TEST(PairFile, RoundTripsJudgments) {
  TempDir dir;
  const std::vector<RankingPair> pairs{{"b", "a", Provenance::manual}, {"c", "b", Provenance::manual}};
  write_pair_file(dir / "p.csv", pairs);
  const auto judgments = read_pair_file(dir / "p.csv");
  ASSERT_EQ(judgments.size(), 2u);
  EXPECT_EQ(judgments[0].i, "b");
  EXPECT_EQ(judgments[0].j, "a");
  EXPECT_EQ(judgments[0].q, 1);
}

TEST(PairFile, RejectsBadVerdictAndHeader) {
  TempDir dir;
  csv::write_text(dir / "q.csv", "i,j,q\na,b,2\n");
  EXPECT_THROW(read_pair_file(dir / "q.csv"), IoError);
  csv::write_text(dir / "h.csv", "a,b,c\nx,y,1\n");
  EXPECT_THROW(read_pair_file(dir / "h.csv"), IoError);
}

TEST(PairFile, ClosureExportHasProvenanceColumn) {
  TempDir dir;
  RankGraph g;
  add_ok(g, "A", "B");
  add_ok(g, "B", "C");
  write_closure_file(dir / "c.csv", g.transitive_closure());
  EXPECT_EQ(csv::read_text(dir / "c.csv"),
            "i,j,q,provenance\nA,B,1,manual\nA,C,1,implied\nB,C,1,manual\n");
}

TEST(PairFile, BuildGraphReportsConflicts) {
  const std::vector<Judgment> judgments{{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}};
  try {
    (void)build_graph(judgments);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("a->b->c"), std::string::npos) << e.what();
  }
}
