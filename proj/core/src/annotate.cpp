#include "rankcount/annotate.hpp"

#include <algorithm>

#include "rankcount/csv.hpp"
#include "rankcount/error.hpp"
#include "rankcount/synthdata.hpp"

namespace rankcount {

namespace {

// Random draws tried before falling back to enumerating every candidate.
constexpr int kRejectionTries = 128;

std::pair<std::size_t, std::size_t> ordered_key(std::size_t a, std::size_t b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

AnnotationSession::AnnotationSession(std::vector<std::string> pool, int cap, std::uint64_t seed)
    : pool_(std::move(pool)), cap_(cap), rng_(seed) {
  if (pool_.size() < 2) throw DomainError("pool needs at least 2 images");
  if (cap_ < 1) throw DomainError("query cap must be >= 1");
  for (std::size_t k = 0; k < pool_.size(); ++k) {
    if (!index_.emplace(pool_[k], k).second) throw DomainError("duplicate id in pool: '" + pool_[k] + "'");
  }
  graph_index_.assign(pool_.size(), std::nullopt);
  queries_.assign(pool_.size(), 0);
}

std::size_t AnnotationSession::pool_index(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw DomainError("unknown image id '" + std::string(id) + "'");
  return it->second;
}

int AnnotationSession::query_count(std::string_view id) const { return queries_[pool_index(id)]; }

void AnnotationSession::refresh_graph_index() {
  for (std::size_t k = 0; k < pool_.size(); ++k) graph_index_[k] = graph_.index_of(pool_[k]);
}

bool AnnotationSession::ordered(std::size_t a, std::size_t b) const {
  const auto ga = graph_index_[a];
  const auto gb = graph_index_[b];
  if (!ga || !gb) return false;
  return graph_.reaches(*ga, *gb) || graph_.reaches(*gb, *ga);
}

bool AnnotationSession::candidate(std::size_t a, std::size_t b) const {
  if (a == b) return false;
  if (queries_[a] >= cap_ || queries_[b] >= cap_) return false;
  if (skipped_.count(ordered_key(a, b))) return false;
  return !ordered(a, b);
}

bool AnnotationSession::is_candidate(std::string_view i, std::string_view j) const {
  return candidate(pool_index(i), pool_index(j));
}

std::vector<std::size_t> AnnotationSession::open_images() const {
  std::vector<std::size_t> open;
  for (std::size_t k = 0; k < pool_.size(); ++k)
    if (queries_[k] < cap_) open.push_back(k);
  return open;
}

std::size_t AnnotationSession::count_candidates() const {
  const auto open = open_images();
  const std::size_t u = open.size();
  if (u < 2) return 0;
  std::size_t excluded = 0;

  // Ordered pairs among open images. Walking descendants visits each
  // comparable pair once.
  std::vector<std::optional<std::size_t>> pool_of_vertex(graph_.vertex_count());
  for (std::size_t k = 0; k < pool_.size(); ++k)
    if (graph_index_[k]) pool_of_vertex[*graph_index_[k]] = k;
  for (std::size_t a : open) {
    if (!graph_index_[a]) continue;
    graph_.for_each_descendant(*graph_index_[a], [&](std::size_t v) {
      const auto b = pool_of_vertex[v];
      if (b && queries_[*b] < cap_) ++excluded;
    });
  }
  for (const auto& [a, b] : skipped_) {
    if (queries_[a] < cap_ && queries_[b] < cap_ && !ordered(a, b)) ++excluded;
  }
  return u * (u - 1) / 2 - excluded;
}

std::optional<ProposedPair> AnnotationSession::next_pair() {
  if (pending_ && candidate(pending_->first, pending_->second)) {
    return ProposedPair{pool_[pending_->first], pool_[pending_->second]};
  }
  pending_.reset();
  const auto open = open_images();
  if (open.size() < 2) return std::nullopt;

  // Uniform draws over open pairs, accepted only when eligible, are uniform
  // over the eligible set.
  for (int attempt = 0; attempt < kRejectionTries; ++attempt) {
    const auto x = static_cast<std::size_t>(rng_.index(open.size()));
    auto y = static_cast<std::size_t>(rng_.index(open.size() - 1));
    if (y >= x) ++y;
    const std::size_t a = std::min(open[x], open[y]);
    const std::size_t b = std::max(open[x], open[y]);
    if (candidate(a, b)) {
      pending_ = {a, b};
      break;
    }
  }
  if (!pending_) {
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t x = 0; x < open.size(); ++x)
      for (std::size_t y = x + 1; y < open.size(); ++y)
        if (candidate(open[x], open[y])) all.emplace_back(open[x], open[y]);
    if (all.empty()) return std::nullopt;
    pending_ = all[static_cast<std::size_t>(rng_.index(all.size()))];
  }
  return ProposedPair{pool_[pending_->first], pool_[pending_->second]};
}

JudgmentOutcome AnnotationSession::submit(std::string_view i, std::string_view j, int verdict) {
  const std::size_t a = pool_index(i);
  const std::size_t b = pool_index(j);
  if (a == b) throw DomainError("self-pair: '" + std::string(i) + "'");
  if (verdict < -1 || verdict > 1) throw DomainError("verdict must be -1, 0 or 1");
  if (queries_[a] >= cap_ || queries_[b] >= cap_) {
    throw DomainError("query cap reached for '" + (queries_[a] >= cap_ ? std::string(i) : std::string(j)) + "'");
  }

  JudgmentOutcome outcome;
  if (verdict == 0) {
    skipped_.insert(ordered_key(a, b));
    outcome.status = JudgmentStatus::skipped;
  } else if (auto conflict = graph_.add_pair(i, j, verdict)) {
    outcome.status = JudgmentStatus::conflict;
    outcome.witness = std::move(conflict->witness);
    outcome.stats = stats();
    return outcome;
  } else {
    refresh_graph_index();
    outcome.status = JudgmentStatus::accepted;
  }
  ++queries_[a];
  ++queries_[b];
  pending_.reset();
  outcome.stats = stats();
  return outcome;
}

SessionStats AnnotationSession::stats() const {
  const auto label = graph_.label_stats();
  SessionStats s;
  s.manual = label.manual;
  s.implied = label.implied;
  s.total = label.total;
  s.remaining = count_candidates();
  s.zeta_mean = sparsity_report(graph_.manual_pairs()).zeta_mean;
  return s;
}

std::string AnnotationSession::export_csv() const {
  std::string text = "i,j,q\n";
  for (const auto& p : graph_.manual_pairs()) text += csv::join_row({p.hi, p.lo, "1"}) + "\n";
  return text;
}

std::string SessionStore::create(std::vector<std::string> pool, int cap, std::uint64_t seed) {
  auto entry = std::make_shared<Entry>(AnnotationSession(std::move(pool), cap, seed));
  std::lock_guard lock(mutex_);
  const std::string id = "s" + std::to_string(next_id_++);
  sessions_.emplace(id, std::move(entry));
  return id;
}

bool SessionStore::contains(const std::string& id) const {
  std::lock_guard lock(mutex_);
  return sessions_.count(id) > 0;
}

bool SessionStore::with_session(const std::string& id, const std::function<void(AnnotationSession&)>& fn) {
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return false;
    entry = it->second;
  }
  std::lock_guard lock(entry->mutex);
  fn(entry->session);
  return true;
}

}  // namespace rankcount
