#include "rankcount/rankgraph.hpp"

#include <algorithm>
#include <deque>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"

namespace rankcount {

std::string_view to_string(Provenance p) { return p == Provenance::manual ? "manual" : "implied"; }

RankingPair make_ranking_pair(std::string_view i, std::string_view j, int q) {
  if (i == j) throw DomainError("self-pair: '" + std::string(i) + "'");
  if (q == 1) return {std::string(i), std::string(j), Provenance::manual};
  if (q == -1) return {std::string(j), std::string(i), Provenance::manual};
  throw DomainError("ranking label q must be -1 or 1, got " + std::to_string(q));
}

RankGraph::RankGraph(const RankGraph& other)
    : names_(other.names_),
      index_(other.index_),
      children_(other.children_),
      arc_count_(other.arc_count_) {
  std::lock_guard lock(other.cache_mutex_);
  reach_ = other.reach_;
}

RankGraph& RankGraph::operator=(const RankGraph& other) {
  if (this != &other) {
    RankGraph copy(other);
    *this = std::move(copy);
  }
  return *this;
}

RankGraph::RankGraph(RankGraph&& other) noexcept
    : names_(std::move(other.names_)),
      index_(std::move(other.index_)),
      children_(std::move(other.children_)),
      arc_count_(other.arc_count_),
      reach_(std::move(other.reach_)) {
  other.arc_count_ = 0;
  other.reach_.reset();
}

RankGraph& RankGraph::operator=(RankGraph&& other) noexcept {
  if (this != &other) {
    names_ = std::move(other.names_);
    index_ = std::move(other.index_);
    children_ = std::move(other.children_);
    arc_count_ = other.arc_count_;
    reach_ = std::move(other.reach_);
    other.arc_count_ = 0;
    other.reach_.reset();
  }
  return *this;
}

std::size_t RankGraph::intern(std::string_view id) {
  auto it = index_.find(std::string(id));
  if (it != index_.end()) return it->second;
  const std::size_t idx = names_.size();
  names_.emplace_back(id);
  index_.emplace(names_.back(), idx);
  children_.emplace_back();
  return idx;
}

std::optional<std::size_t> RankGraph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool RankGraph::contains(std::string_view id) const { return index_of(id).has_value(); }

void RankGraph::invalidate() {
  std::lock_guard lock(cache_mutex_);
  reach_.reset();
}

std::optional<std::vector<std::size_t>> RankGraph::find_path(std::size_t from, std::size_t to) const {
  // Breadth-first search gives a shortest witness; children are name-sorted,
  // so the witness is deterministic.
  std::vector<std::size_t> parent(names_.size(), SIZE_MAX);
  std::vector<bool> seen(names_.size(), false);
  std::deque<std::size_t> frontier{from};
  seen[from] = true;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop_front();
    if (u == to) break;
    for (std::size_t c : children_[u]) {
      if (!seen[c]) {
        seen[c] = true;
        parent[c] = u;
        frontier.push_back(c);
      }
    }
  }
  if (!seen[to]) return std::nullopt;
  std::vector<std::size_t> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<Conflict> RankGraph::add_pair(std::string_view i, std::string_view j, int q) {
  return add_pair(make_ranking_pair(i, j, q));
}

std::optional<Conflict> RankGraph::add_pair(const RankingPair& pair) {
  if (pair.hi == pair.lo) throw DomainError("self-pair: '" + pair.hi + "'");
  const auto hi_idx = index_of(pair.hi);
  const auto lo_idx = index_of(pair.lo);
  if (hi_idx && lo_idx) {
    auto& kids = children_[*hi_idx];
    if (std::find(kids.begin(), kids.end(), *lo_idx) != kids.end()) return std::nullopt;
    if (auto path = find_path(*lo_idx, *hi_idx)) {
      Conflict conflict;
      for (std::size_t v : *path) conflict.witness.push_back(names_[v]);
      return conflict;
    }
  }
  const std::size_t hi = intern(pair.hi);
  const std::size_t lo = intern(pair.lo);
  auto& kids = children_[hi];
  auto pos = std::lower_bound(kids.begin(), kids.end(), lo,
                              [this](std::size_t a, std::size_t b) { return names_[a] < names_[b]; });
  kids.insert(pos, lo);
  ++arc_count_;
  invalidate();
  return std::nullopt;
}

const std::vector<RankGraph::Bits>& RankGraph::reachability() const {
  std::lock_guard lock(cache_mutex_);
  if (reach_) return *reach_;
  const std::size_t n = names_.size();
  const std::size_t words = (n + 63) / 64;
  std::vector<Bits> reach(n, Bits(words, 0));

  // Kahn's algorithm; the graph is acyclic by construction.
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& kids : children_)
    for (std::size_t c : kids) ++indegree[c];
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) order.push_back(v);
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t c : children_[order[k]])
      if (--indegree[c] == 0) order.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Bits& row = reach[*it];
    for (std::size_t c : children_[*it]) {
      row[c / 64] |= std::uint64_t{1} << (c % 64);
      const Bits& sub = reach[c];
      for (std::size_t w = 0; w < words; ++w) row[w] |= sub[w];
    }
  }
  reach_ = std::move(reach);
  return *reach_;
}

bool RankGraph::reaches(std::size_t from, std::size_t to) const {
  const auto& reach = reachability();
  return (reach[from][to / 64] >> (to % 64)) & 1U;
}

std::vector<RankingPair> RankGraph::transitive_closure() const {
  const auto& reach = reachability();
  std::vector<RankingPair> out;
  for (std::size_t u = 0; u < names_.size(); ++u) {
    const auto& kids = children_[u];
    for (std::size_t v = 0; v < names_.size(); ++v) {
      if (!((reach[u][v / 64] >> (v % 64)) & 1U)) continue;
      const bool manual = std::find(kids.begin(), kids.end(), v) != kids.end();
      out.push_back({names_[u], names_[v], manual ? Provenance::manual : Provenance::implied});
    }
  }
  std::sort(out.begin(), out.end(), [](const RankingPair& a, const RankingPair& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
  });
  return out;
}

std::vector<RankingPair> RankGraph::manual_pairs() const {
  std::vector<RankingPair> out;
  out.reserve(arc_count_);
  for (std::size_t u = 0; u < names_.size(); ++u)
    for (std::size_t v : children_[u]) out.push_back({names_[u], names_[v], Provenance::manual});
  std::sort(out.begin(), out.end(), [](const RankingPair& a, const RankingPair& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
  });
  return out;
}

Relation RankGraph::query_relation(std::string_view i, std::string_view j) const {
  if (i == j) throw DomainError("self-pair: '" + std::string(i) + "'");
  const auto a = index_of(i);
  const auto b = index_of(j);
  if (!a || !b) return Relation::unknown;
  if (reaches(*a, *b)) return Relation::i_higher;
  if (reaches(*b, *a)) return Relation::j_higher;
  return Relation::unknown;
}

LabelStats RankGraph::label_stats() const {
  const auto& reach = reachability();
  std::size_t total = 0;
  for (const auto& row : reach)
    for (std::uint64_t w : row) total += static_cast<std::size_t>(__builtin_popcountll(w));
  return {arc_count_, total - arc_count_, total};
}

std::vector<Judgment> read_pair_file(const std::filesystem::path& path) {
  const auto table = csv::read_file(path, {"i", "j", "q"});
  std::vector<Judgment> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    long long q = 0;
    try {
      q = csv::parse_int(row[2]);
    } catch (const IoError& e) {
      throw IoError(path.string() + ": line " + std::to_string(table.line_numbers[r]) + ": " + e.what());
    }
    if (q != 1 && q != -1) {
      throw IoError(path.string() + ": line " + std::to_string(table.line_numbers[r]) +
                    ": q must be -1 or 1");
    }
    out.push_back({row[0], row[1], static_cast<int>(q)});
  }
  return out;
}

void write_pair_file(const std::filesystem::path& path, const std::vector<RankingPair>& pairs) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(pairs.size());
  for (const auto& p : pairs) rows.push_back({p.hi, p.lo, "1"});
  csv::write_file(path, {"i", "j", "q"}, rows);
}

void write_closure_file(const std::filesystem::path& path, const std::vector<RankingPair>& closure) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(closure.size());
  for (const auto& p : closure) rows.push_back({p.hi, p.lo, "1", std::string(to_string(p.provenance))});
  csv::write_file(path, {"i", "j", "q", "provenance"}, rows);
}

RankGraph build_graph(const std::vector<Judgment>& judgments) {
  RankGraph graph;
  for (const auto& jd : judgments) {
    if (auto conflict = graph.add_pair(jd.i, jd.j, jd.q)) {
      std::string path;
      for (const auto& id : conflict->witness) path += (path.empty() ? "" : "->") + id;
      throw DomainError("conflicting judgment <" + jd.i + "," + jd.j + "," + std::to_string(jd.q) +
                        ">: existing path " + path);
    }
  }
  return graph;
}

}  // namespace rankcount
