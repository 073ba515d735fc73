#include "transkb/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <thread>

namespace transkb {

namespace {

real slot_distance(std::span<const real> fixed, std::span<const real> rel,
                   std::span<const real> candidate, Side side, Distance distance) {
  // head slot: d(candidate + r, fixed tail); tail slot: d(fixed head + r, candidate)
  return side == Side::left ? translation_distance(candidate, rel, fixed, distance)
                            : translation_distance(fixed, rel, candidate, distance);
}

std::string percent(real v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v << '%';
  return out.str();
}

std::string fixed2(real v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

std::string full_precision(real v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

std::int64_t rank_side(const EmbeddingStore& store, const Triple& triple, Side side,
                       std::span<const EntityId> candidates, bool pessimistic) {
  if (candidates.empty()) throw ConfigError("rank_side requires a non-empty candidate set");
  EntityId true_entity = side == Side::left ? triple.head : triple.tail;
  std::span<const real> fixed =
      side == Side::left ? store.entity(triple.tail) : store.entity(triple.head);
  std::span<const real> rel = store.relation(triple.relation);
  real true_distance = slot_distance(fixed, rel, store.entity(true_entity), side, store.distance);

  std::int64_t ahead = 0;
  for (EntityId c : candidates) {
    real d = slot_distance(fixed, rel, store.entity(c), side, store.distance);
    if (d < true_distance) {
      ++ahead;
    } else if (pessimistic && d == true_distance && c != true_entity) {
      ++ahead;
    }
  }
  return ahead + 1;
}

EvalReport link_prediction_eval(const EmbeddingStore& store, std::span<const Triple> triples,
                                std::span<const EntityId> candidates,
                                const EvalOptions& options) {
  if (candidates.empty()) {
    throw ConfigError("link_prediction_eval requires a non-empty candidate set");
  }
  if (options.threads < 1) throw ConfigError("threads must be >= 1");
  if (options.sample_size < 0) throw ConfigError("sample_size must be >= 0");
  if (options.hits_cutoff < 1) throw ConfigError("hits_cutoff must be >= 1");

  EvalReport report;
  report.total_triples = static_cast<std::int64_t>(triples.size());
  report.candidate_count = static_cast<std::int64_t>(candidates.size());
  report.hits_cutoff = options.hits_cutoff;

  std::vector<std::int64_t> indices(triples.size());
  std::iota(indices.begin(), indices.end(), std::int64_t(0));
  if (options.sample_size > 0 &&
      options.sample_size < static_cast<std::int64_t>(triples.size())) {
    Rng rng(substream_seed(options.seed, "eval"));
    rng.shuffle(indices);
    indices.resize(static_cast<std::size_t>(options.sample_size));
    std::sort(indices.begin(), indices.end());
  }
  report.triple_indices = indices;
  report.evaluated = static_cast<std::int64_t>(indices.size());
  report.left_ranks.assign(indices.size(), 0);
  report.right_ranks.assign(indices.size(), 0);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Triple& t = triples[static_cast<std::size_t>(indices[i])];
      report.left_ranks[i] = rank_side(store, t, Side::left, candidates, options.pessimistic);
      report.right_ranks[i] = rank_side(store, t, Side::right, candidates, options.pessimistic);
    }
  };

  std::size_t n = indices.size();
  std::size_t thread_count = std::min<std::size_t>(static_cast<std::size_t>(options.threads),
                                                   n == 0 ? 1 : n);
  if (thread_count <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(thread_count);
    std::size_t chunk = (n + thread_count - 1) / thread_count;
    for (std::size_t w = 0; w < thread_count; ++w) {
      std::size_t begin = w * chunk;
      std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  if (report.evaluated > 0) {
    auto summarize = [&](const std::vector<std::int64_t>& ranks, real& mean, real& hits) {
      std::int64_t sum = 0, hit = 0;
      for (std::int64_t r : ranks) {
        sum += r;
        if (r <= options.hits_cutoff) ++hit;
      }
      mean = static_cast<real>(sum) / static_cast<real>(ranks.size());
      hits = real(100) * static_cast<real>(hit) / static_cast<real>(ranks.size());
    };
    summarize(report.left_ranks, report.left_mean_rank, report.left_hits);
    summarize(report.right_ranks, report.right_mean_rank, report.right_hits);
    report.mean_rank = (report.left_mean_rank + report.right_mean_rank) / 2;
    report.hits = (report.left_hits + report.right_hits) / 2;
  }
  return report;
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << "evaluated " << evaluated << " of " << total_triples << " triples against "
      << candidate_count << " candidates\n";
  out << "left : mean rank " << fixed2(left_mean_rank) << ", hits@" << hits_cutoff << " "
      << percent(left_hits) << "\n";
  out << "right: mean rank " << fixed2(right_mean_rank) << ", hits@" << hits_cutoff << " "
      << percent(right_hits) << "\n";
  out << "avg  : mean rank " << fixed2(mean_rank) << ", hits@" << hits_cutoff << " "
      << percent(hits) << "\n";
  return out.str();
}

std::string EvalReport::to_tsv() const {
  std::ostringstream out;
  out << "evaluated\ttotal\tcandidates\tleft_mean_rank\tright_mean_rank\tmean_rank\t"
      << "left_hits" << hits_cutoff << "\tright_hits" << hits_cutoff << "\thits" << hits_cutoff
      << "\n";
  out << evaluated << '\t' << total_triples << '\t' << candidate_count << '\t'
      << full_precision(left_mean_rank) << '\t' << full_precision(right_mean_rank) << '\t'
      << full_precision(mean_rank) << '\t' << full_precision(left_hits) << '\t'
      << full_precision(right_hits) << '\t' << full_precision(hits) << "\n";
  return out.str();
}

std::string EvalReport::ranks_tsv() const {
  std::ostringstream out;
  out << "triple\tleft_rank\tright_rank\n";
  for (std::size_t i = 0; i < triple_indices.size(); ++i) {
    out << triple_indices[i] << '\t' << left_ranks[i] << '\t' << right_ranks[i] << "\n";
  }
  return out.str();
}

UnseenEvalReport unseen_entity_eval(const EmbeddingStore& store, std::span<const Triple> triples,
                                    const std::unordered_set<EntityId>& seen,
                                    std::span<const EntityId> candidates,
                                    const UnseenEvalOptions& options) {
  if (candidates.empty()) {
    throw ConfigError("unseen_entity_eval requires a non-empty candidate set");
  }
  if (options.hits_cutoff < 1) throw ConfigError("hits_cutoff must be >= 1");
  UnseenEvalReport report;
  report.hits_cutoff = options.hits_cutoff;
  for (const Triple& t : triples) {
    bool head_seen = seen.contains(t.head);
    bool tail_seen = seen.contains(t.tail);
    if (head_seen && tail_seen) {
      ++report.skipped_both_seen;
      continue;
    }
    if (!head_seen && !tail_seen) {
      ++report.skipped_both_unseen;
      continue;
    }
    ++report.evaluated;
    Side seen_slot = head_seen ? Side::left : Side::right;
    report.ranks.push_back(rank_side(store, t, seen_slot, candidates, options.pessimistic));
    if (options.rank_unseen_side) {
      Side unseen_slot = head_seen ? Side::right : Side::left;
      report.ranks.push_back(rank_side(store, t, unseen_slot, candidates, options.pessimistic));
    }
  }
  if (!report.ranks.empty()) {
    std::int64_t sum = 0, hit = 0;
    for (std::int64_t r : report.ranks) {
      sum += r;
      if (r <= options.hits_cutoff) ++hit;
    }
    report.mean_rank = static_cast<real>(sum) / static_cast<real>(report.ranks.size());
    report.hits = real(100) * static_cast<real>(hit) / static_cast<real>(report.ranks.size());
  }
  return report;
}

std::string UnseenEvalReport::to_text() const {
  std::ostringstream out;
  out << "evaluated " << evaluated << " triples with one unseen entity (skipped "
      << skipped_both_seen << " fully seen, " << skipped_both_unseen << " fully unseen)\n";
  out << "mean rank " << fixed2(mean_rank) << ", hits@" << hits_cutoff << " " << percent(hits)
      << "\n";
  return out.str();
}

std::string UnseenEvalReport::to_tsv() const {
  std::ostringstream out;
  out << "unseen_evaluated\tskipped_both_seen\tskipped_both_unseen\tunseen_mean_rank\t"
      << "unseen_hits" << hits_cutoff << "\n";
  out << evaluated << '\t' << skipped_both_seen << '\t' << skipped_both_unseen << '\t'
      << full_precision(mean_rank) << '\t' << full_precision(hits) << "\n";
  return out.str();
}

}  // namespace transkb
