#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rankcount {

enum class Provenance { manual, implied };

std::string_view to_string(Provenance p);

/// One ranking judgment with normalized orientation: `hi` is the image
/// asserted to contain more people. A label <i, j, -1> is stored as hi=j, lo=i.
struct RankingPair {
  std::string hi;
  std::string lo;
  Provenance provenance = Provenance::manual;

  bool operator==(const RankingPair&) const = default;
};

/// Normalizes <i, j, q>. Throws DomainError when i == j or q is not +-1.
RankingPair make_ranking_pair(std::string_view i, std::string_view j, int q);

enum class Relation { i_higher, j_higher, unknown };

/// Returned when a judgment contradicts what the graph already implies.
/// `witness` is a directed path lo -> ... -> hi of the rejected judgment.
struct Conflict {
  std::vector<std::string> witness;
};

struct LabelStats {
  std::size_t manual = 0;
  std::size_t implied = 0;
  std::size_t total = 0;

  bool operator==(const LabelStats&) const = default;
};

/// Order relation over opaque image ids, kept acyclic. Arcs point from the
/// image with more people to the image with fewer.
///
/// Reachability is memoized and rebuilt lazily after a mutation. Mutations
/// must be serialized by the caller; const member functions may run
/// concurrently with each other.
class RankGraph {
 public:
  RankGraph() = default;
  RankGraph(const RankGraph& other);
  RankGraph& operator=(const RankGraph& other);
  RankGraph(RankGraph&& other) noexcept;
  RankGraph& operator=(RankGraph&& other) noexcept;

  /// Inserts <i, j, q>. Returns a Conflict (and leaves the graph unchanged)
  /// when the reverse order is already implied. Re-asserting an implied or
  /// existing relation is accepted and records the arc as manual.
  [[nodiscard]] std::optional<Conflict> add_pair(std::string_view i, std::string_view j, int q);
  [[nodiscard]] std::optional<Conflict> add_pair(const RankingPair& pair);

  /// Every (hi, lo) with a directed path hi -> lo, sorted by (hi, lo).
  std::vector<RankingPair> transitive_closure() const;

  /// Manually asserted arcs, sorted by (hi, lo).
  std::vector<RankingPair> manual_pairs() const;

  /// Throws DomainError when i == j. Ids absent from the graph are unknown.
  Relation query_relation(std::string_view i, std::string_view j) const;

  LabelStats label_stats() const;

  bool contains(std::string_view id) const;
  std::size_t vertex_count() const { return names_.size(); }
  std::size_t arc_count() const { return arc_count_; }

  /// Vertex ids in first-insertion order; indices below refer to this list.
  const std::vector<std::string>& vertices() const { return names_; }
  std::optional<std::size_t> index_of(std::string_view id) const;

  /// True when a directed path from vertex `from` to vertex `to` exists.
  bool reaches(std::size_t from, std::size_t to) const;

  /// Calls fn(index) for every vertex reachable from `from`, ascending index.
  template <typename Fn>
  void for_each_descendant(std::size_t from, Fn&& fn) const {
    const auto& row = reachability()[from];
    for (std::size_t w = 0; w < row.size(); ++w) {
      for (std::uint64_t bits = row[w]; bits != 0; bits &= bits - 1) {
        fn(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
      }
    }
  }

 private:
  using Bits = std::vector<std::uint64_t>;

  std::size_t intern(std::string_view id);
  std::optional<std::vector<std::size_t>> find_path(std::size_t from, std::size_t to) const;
  const std::vector<Bits>& reachability() const;
  void invalidate();

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  // Children sorted by name so path search is deterministic.
  std::vector<std::vector<std::size_t>> children_;
  std::size_t arc_count_ = 0;

  mutable std::mutex cache_mutex_;
  mutable std::optional<std::vector<Bits>> reach_;
};

/// Judgment as read from a pair file (`i,j,q`).
struct Judgment {
  std::string i;
  std::string j;
  int q = 1;
};

std::vector<Judgment> read_pair_file(const std::filesystem::path& path);

/// Writes pairs as `i,j,q` rows with i=hi, j=lo, q=1.
void write_pair_file(const std::filesystem::path& path, const std::vector<RankingPair>& pairs);

/// Writes `i,j,q,provenance`.
void write_closure_file(const std::filesystem::path& path, const std::vector<RankingPair>& closure);

/// Builds a graph from judgments in file order. Throws DomainError with the
/// witness path on the first contradiction.
RankGraph build_graph(const std::vector<Judgment>& judgments);

}  // namespace rankcount
