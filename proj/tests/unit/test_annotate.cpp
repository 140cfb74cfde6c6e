#include <gtest/gtest.h>

#include <set>

#include "rankcount/annotate.hpp"
#include "rankcount/error.hpp"
#include "rankcount/rng.hpp"

using namespace rankcount;

namespace {

std::vector<std::string> make_pool(std::size_t n) {
  std::vector<std::string> pool;
  for (std::size_t k = 0; k < n; ++k) pool.push_back("img" + std::to_string(k));
  return pool;
}

// Ground-truth verdict from a hidden count per id.
int oracle_verdict(const std::string& i, const std::string& j) {
  const auto ci = std::stoi(i.substr(3)) % 17;
  const auto cj = std::stoi(j.substr(3)) % 17;
  if (ci == cj) return 0;
  return ci > cj ? 1 : -1;
}

}  // namespace

TEST(Session, PoolOfTwoProposesThatPair) {
  AnnotationSession s({"a", "b"}, 3, 1);
  const auto p = s.next_pair();
  ASSERT_TRUE(p);
  EXPECT_EQ(std::set<std::string>({p->i, p->j}), (std::set<std::string>{"a", "b"}));
  EXPECT_EQ(s.next_pair(), p);
  EXPECT_EQ(s.submit("a", "b", 1).status, JudgmentStatus::accepted);
  EXPECT_FALSE(s.next_pair());
}

TEST(Session, CapOneBoundsJudgmentsByHalfThePool) {
  AnnotationSession s(make_pool(2000), 1, 5);
  std::size_t judgments = 0;
  while (auto p = s.next_pair()) {
    ASSERT_EQ(s.query_count(p->i), 0);
    ASSERT_EQ(s.query_count(p->j), 0);
    s.submit(p->i, p->j, 1);
    ++judgments;
  }
  EXPECT_EQ(judgments, 1000u);
  EXPECT_EQ(s.stats().remaining, 0u);
}

TEST(Session, RejectsInvalidConstruction) {
  EXPECT_THROW(AnnotationSession({"a", "a", "b"}, 3, 0), DomainError);
  EXPECT_THROW(AnnotationSession({"a"}, 3, 0), DomainError);
  EXPECT_THROW(AnnotationSession({"a", "b"}, 0, 0), DomainError);
}

TEST(Session, RejectsInvalidJudgments) {
  AnnotationSession s({"a", "b", "c"}, 1, 0);
  EXPECT_THROW(s.submit("a", "x", 1), DomainError);
  EXPECT_THROW(s.submit("a", "a", 1), DomainError);
  EXPECT_THROW(s.submit("a", "b", 2), DomainError);
  s.submit("a", "b", 1);
  EXPECT_THROW(s.submit("a", "c", 1), DomainError);
}

TEST(Session, NeverProposesAnImpliedOrSkippedPair) {
  AnnotationSession s(make_pool(40), 3, 11);
  std::set<std::pair<std::string, std::string>> skipped;
  int rounds = 0;
  while (auto p = s.next_pair()) {
    ASSERT_LT(++rounds, 1000);
    const auto& g = s.graph();
    if (g.contains(p->i) && g.contains(p->j)) {
      ASSERT_EQ(g.query_relation(p->i, p->j), Relation::unknown) << p->i << " " << p->j;
    }
    ASSERT_FALSE(skipped.count({p->i, p->j}) || skipped.count({p->j, p->i}));
    const int v = oracle_verdict(p->i, p->j);
    if (v == 0) skipped.insert({p->i, p->j});
    const auto out = s.submit(p->i, p->j, v);
    ASSERT_NE(out.status, JudgmentStatus::conflict);
  }
  for (const auto& id : s.pool()) EXPECT_LE(s.query_count(id), 3);
}

TEST(Session, ConflictReturnsWitnessAndKeepsState) {
  AnnotationSession s({"A", "B", "C", "D"}, 3, 0);
  s.submit("A", "B", 1);
  s.submit("B", "C", 1);
  const auto before = s.stats();
  const auto out = s.submit("C", "A", 1);
  EXPECT_EQ(out.status, JudgmentStatus::conflict);
  EXPECT_EQ(out.witness, (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(s.query_count("A"), 1);
  EXPECT_EQ(s.query_count("C"), 1);
  EXPECT_EQ(s.stats().manual, before.manual);
  EXPECT_EQ(s.stats().implied, before.implied);
  EXPECT_EQ(s.export_csv(), "i,j,q\nA,B,1\nB,C,1\n");
}

TEST(Session, StatsTrackLabelsAndRemaining) {
  AnnotationSession s(make_pool(6), 3, 0);
  const auto fresh = s.stats();
  EXPECT_EQ(fresh.remaining, 15u);
  EXPECT_EQ(fresh.total, 0u);
  EXPECT_FALSE(fresh.zeta_mean);

  s.submit("img0", "img1", 1);
  const auto after = s.submit("img1", "img2", 1);
  EXPECT_EQ(after.stats.manual, 2u);
  EXPECT_EQ(after.stats.implied, 1u);
  EXPECT_EQ(after.stats.total, 3u);
  EXPECT_EQ(after.stats.remaining, 12u);
  ASSERT_TRUE(after.stats.zeta_mean);
  EXPECT_NEAR(*after.stats.zeta_mean, 4.0 / 3.0, 1e-12);
  EXPECT_FALSE(s.is_candidate("img0", "img2"));

  const auto skip = s.submit("img3", "img4", 0);
  EXPECT_EQ(skip.status, JudgmentStatus::skipped);
  EXPECT_EQ(skip.stats.remaining, 11u);
  EXPECT_FALSE(s.is_candidate("img3", "img4"));
  EXPECT_EQ(skip.stats.manual, 2u);
}

TEST(Session, IsDeterministicInSeed) {
  auto replay = [](std::uint64_t seed) {
    AnnotationSession s(make_pool(30), 2, seed);
    std::vector<ProposedPair> seen;
    while (auto p = s.next_pair()) {
      seen.push_back(*p);
      s.submit(p->i, p->j, oracle_verdict(p->i, p->j));
    }
    return seen;
  };
  EXPECT_EQ(replay(3), replay(3));
  EXPECT_NE(replay(3), replay(4));
}

TEST(Store, CreatesAndSerializesSessions) {
  SessionStore store;
  const auto a = store.create({"x", "y"}, 3, 0);
  const auto b = store.create({"x", "y", "z"}, 3, 0);
  EXPECT_NE(a, b);
  EXPECT_TRUE(store.contains(a));
  EXPECT_FALSE(store.contains("nope"));
  std::size_t size = 0;
  EXPECT_TRUE(store.with_session(b, [&](AnnotationSession& s) { size = s.pool().size(); }));
  EXPECT_EQ(size, 3u);
  EXPECT_FALSE(store.with_session("nope", [](AnnotationSession&) {}));
  EXPECT_THROW(store.create({"x"}, 3, 0), DomainError);
}
