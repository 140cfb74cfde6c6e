#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rankcount/rankgraph.hpp"
#include "rankcount/rng.hpp"

namespace rankcount {

inline constexpr int kDefaultQueryCap = 3;

struct SessionStats {
  std::size_t manual = 0;
  std::size_t implied = 0;
  std::size_t total = 0;
  std::size_t remaining = 0;
  // Mean number of judgments per judged image; empty before the first one.
  std::optional<double> zeta_mean;
};

struct ProposedPair {
  std::string i;
  std::string j;

  bool operator==(const ProposedPair&) const = default;
};

enum class JudgmentStatus { accepted, skipped, conflict };

struct JudgmentOutcome {
  JudgmentStatus status = JudgmentStatus::accepted;
  std::vector<std::string> witness;  // set for conflicts
  SessionStats stats;
};

/// A live pairwise-ranking session over a fixed pool of images.
///
/// A pair is a candidate when neither image has reached its query cap, the
/// pair was not judged "can't tell", and the graph does not already order
/// it. Proposals are drawn uniformly from the candidates with the session's
/// seeded generator, so a session replayed with the same judgments sees the
/// same proposals. Not thread-safe; SessionStore serializes access.
class AnnotationSession {
 public:
  /// Throws DomainError for pools with fewer than two or duplicate ids, or a
  /// cap below 1.
  AnnotationSession(std::vector<std::string> pool, int cap, std::uint64_t seed);

  /// The current proposal, or empty when no candidate remains. Repeated calls
  /// return the same pair until a judgment changes the session.
  std::optional<ProposedPair> next_pair();

  /// verdict 1: i has more people, -1: j has more, 0: can't tell.
  /// Throws DomainError for unknown ids, i == j, a bad verdict or a capped
  /// image. Conflicts leave the session unchanged.
  JudgmentOutcome submit(std::string_view i, std::string_view j, int verdict);

  SessionStats stats() const;

  bool is_candidate(std::string_view i, std::string_view j) const;

  const RankGraph& graph() const { return graph_; }
  const std::vector<std::string>& pool() const { return pool_; }
  int cap() const { return cap_; }
  int query_count(std::string_view id) const;

  /// Accepted judgments in pair-file format (`i,j,q`).
  std::string export_csv() const;

 private:
  std::size_t pool_index(std::string_view id) const;
  bool candidate(std::size_t a, std::size_t b) const;
  bool ordered(std::size_t a, std::size_t b) const;
  std::vector<std::size_t> open_images() const;
  std::size_t count_candidates() const;
  void refresh_graph_index();

  std::vector<std::string> pool_;
  std::unordered_map<std::string, std::size_t> index_;
  int cap_;
  Rng rng_;
  RankGraph graph_;
  // Pool index -> graph vertex index, when the image has arcs.
  std::vector<std::optional<std::size_t>> graph_index_;
  std::set<std::pair<std::size_t, std::size_t>> skipped_;
  std::vector<int> queries_;
  std::optional<std::pair<std::size_t, std::size_t>> pending_;
};

/// Thread-safe registry of sessions. Requests on one session are serialized;
/// distinct sessions proceed independently.
class SessionStore {
 public:
  /// Returns the new session id.
  std::string create(std::vector<std::string> pool, int cap, std::uint64_t seed);

  bool contains(const std::string& id) const;

  /// Runs fn with exclusive access to the session. Returns false when the id
  /// is unknown.
  bool with_session(const std::string& id, const std::function<void(AnnotationSession&)>& fn);

 private:
  struct Entry {
    explicit Entry(AnnotationSession s) : session(std::move(s)) {}
    std::mutex mutex;
    AnnotationSession session;
  };

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace rankcount
