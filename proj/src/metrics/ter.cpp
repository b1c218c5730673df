// Translation edit rate following the Tercom procedure as re-implemented by
// the reference scorer: repeatedly apply the block shift that most reduces
// the word edit distance (shift length <= 10, distance <= 50, at most 1000
// candidates per sentence), then count shifts plus the remaining edits.
// The edit distance is computed in a band around the length-scaled diagonal.
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>

#include "tfbench/error.hpp"
#include "tfbench/metrics.hpp"
#include "tfbench/unicode.hpp"

namespace tfbench::metrics {
namespace {

constexpr int kMaxShiftSize = 10;
constexpr int kMaxShiftDist = 50;
constexpr int kBeamWidth = 25;
constexpr int kMaxShiftCandidates = 1000;
constexpr std::int64_t kInfinity = 10'000'000'000'000'000LL;

enum Op : char { kNop = ' ', kSub = 's', kIns = 'i', kDel = 'd', kUndef = 'x' };

using Words = std::vector<int>;

struct Cell {
  std::int64_t cost;
  char op;
};

// Edit distance from hypothesis to the fixed reference, with the trace of
// operations. The cheapest operation wins; ties prefer match/substitution,
// then deletion, then insertion.
class BeamEditDistance {
 public:
  explicit BeamEditDistance(const Words& ref) : ref_(ref) {}

  std::pair<std::int64_t, std::string> operator()(const Words& hyp) const {
    const std::size_t n_h = hyp.size();
    const std::size_t n_r = ref_.size();
    std::vector<std::vector<Cell>> dist(n_h + 1, std::vector<Cell>(n_r + 1, {kInfinity, kUndef}));
    for (std::size_t j = 0; j <= n_r; ++j) dist[0][j] = {static_cast<std::int64_t>(j), kIns};

    const double length_ratio =
        n_h > 0 ? static_cast<double>(n_r) / static_cast<double>(n_h) : 1.0;
    long beam_width = kBeamWidth;
    if (kBeamWidth < length_ratio / 2) {
      beam_width = static_cast<long>(std::ceil(length_ratio / 2 + kBeamWidth));
    }

    for (std::size_t i = 1; i <= n_h; ++i) {
      const auto pseudo_diag = static_cast<long>(std::floor(static_cast<double>(i) * length_ratio));
      const long min_j = std::max(0L, pseudo_diag - beam_width);
      long max_j = std::min(static_cast<long>(n_r) + 1, pseudo_diag + beam_width);
      if (i == n_h) max_j = static_cast<long>(n_r) + 1;
      for (long jj = min_j; jj < max_j; ++jj) {
        const auto j = static_cast<std::size_t>(jj);
        if (j == 0) {
          dist[i][0] = {dist[i - 1][0].cost + 1, kDel};
          continue;
        }
        const bool same = hyp[i - 1] == ref_[j - 1];
        const Cell options[3] = {{dist[i - 1][j - 1].cost + (same ? 0 : 1), same ? kNop : kSub},
                                 {dist[i - 1][j].cost + 1, kDel},
                                 {dist[i][j - 1].cost + 1, kIns}};
        for (const Cell& option : options) {
          if (dist[i][j].cost > option.cost) dist[i][j] = option;
        }
      }
    }

    std::string trace;
    std::size_t i = n_h, j = n_r;
    while (i > 0 || j > 0) {
      const char op = dist[i][j].op;
      trace.push_back(op);
      if (op == kSub || op == kNop) {
        --i;
        --j;
      } else if (op == kIns) {
        --j;
      } else if (op == kDel) {
        --i;
      } else {
        throw Error("TER_INTERNAL", "edit-distance trace left the beam");
      }
    }
    std::reverse(trace.begin(), trace.end());
    return {dist[n_h][n_r].cost, trace};
  }

 private:
  const Words& ref_;
};

struct Alignment {
  std::vector<long> ref_to_hyp;  // every reference position, -1 before the first hyp word
  std::vector<int> ref_err;
  std::vector<int> hyp_err;
};

// The trace rewrites the hypothesis into the reference; flipping
// insertions and deletions gives the reference-to-hypothesis alignment.
Alignment align_from_trace(const std::string& trace) {
  Alignment a;
  long pos_hyp = -1, pos_ref = -1;
  for (char raw : trace) {
    const char op = raw == kIns ? char{kDel} : raw == kDel ? char{kIns} : raw;
    switch (op) {
      case kNop:
      case kSub:
        ++pos_hyp;
        ++pos_ref;
        a.ref_to_hyp.push_back(pos_hyp);
        a.hyp_err.push_back(op == kSub);
        a.ref_err.push_back(op == kSub);
        break;
      case kIns:
        ++pos_hyp;
        a.hyp_err.push_back(1);
        break;
      case kDel:
        ++pos_ref;
        a.ref_to_hyp.push_back(pos_hyp);
        a.ref_err.push_back(1);
        break;
      default:
        throw Error("TER_INTERNAL", "unknown edit operation");
    }
  }
  return a;
}

// Slices clamp to the sequence bounds.
Words perform_shift(const Words& words, std::size_t start, std::size_t length, std::size_t target) {
  Words out;
  out.reserve(words.size());
  const auto put = [&](std::size_t from, std::size_t to) {
    from = std::min(from, words.size());
    to = std::min(to, words.size());
    if (from < to) out.insert(out.end(), words.begin() + static_cast<std::ptrdiff_t>(from),
                              words.begin() + static_cast<std::ptrdiff_t>(to));
  };
  const std::size_t end = words.size();
  if (target < start) {
    put(0, target);
    put(start, start + length);
    put(target, start);
    put(start + length, end);
  } else if (target > start + length) {
    put(0, start);
    put(start + length, target);
    put(start, start + length);
    put(target, end);
  } else {
    put(0, start);
    put(start + length, length + target);
    put(start, start + length);
    put(length + target, end);
  }
  return out;
}

struct Candidate {
  std::int64_t gain;
  std::size_t length;
  long neg_start;
  long neg_target;
  Words shifted;

  bool beats(const Candidate& other) const {
    if (gain != other.gain) return gain > other.gain;
    if (length != other.length) return length > other.length;
    if (neg_start != other.neg_start) return neg_start > other.neg_start;
    return neg_target > other.neg_target;
  }
};

// Best single shift; returns the gain (0 when none helps) and the shifted words.
std::int64_t best_shift(const Words& hyp, const Words& ref, const BeamEditDistance& ed,
                        int& checked, Words& shifted_out) {
  const auto [pre_score, trace] = ed(hyp);
  const Alignment al = align_from_trace(trace);
  std::optional<Candidate> best;
  const std::size_t n_h = hyp.size();
  const std::size_t n_r = ref.size();

  bool stop = false;
  for (std::size_t start_h = 0; start_h < n_h && !stop; ++start_h) {
    for (std::size_t start_r = 0; start_r < n_r && !stop; ++start_r) {
      if (std::abs(static_cast<long>(start_r) - static_cast<long>(start_h)) > kMaxShiftDist) continue;
      std::size_t length = 0;
      while (hyp[start_h + length] == ref[start_r + length] && length < kMaxShiftSize) {
        ++length;
        // ---- one (start_h, start_r, length) candidate block
        bool skip = true;
        for (std::size_t k = start_h; k < std::min(start_h + length, al.hyp_err.size()); ++k) {
          if (al.hyp_err[k]) skip = false;
        }
        if (!skip) {
          skip = true;
          for (std::size_t k = start_r; k < std::min(start_r + length, al.ref_err.size()); ++k) {
            if (al.ref_err[k]) skip = false;
          }
        }
        const long aligned = al.ref_to_hyp[start_r];
        if (!skip && static_cast<long>(start_h) <= aligned &&
            aligned < static_cast<long>(start_h + length)) {
          skip = true;
        }
        if (!skip) {
          long prev_idx = -1;
          for (long offset = -1; offset < static_cast<long>(length); ++offset) {
            long idx;
            const long r = static_cast<long>(start_r) + offset;
            if (r == -1) {
              idx = 0;
            } else if (r < static_cast<long>(al.ref_to_hyp.size())) {
              idx = al.ref_to_hyp[static_cast<std::size_t>(r)] + 1;
            } else {
              break;
            }
            if (idx == prev_idx) continue;
            prev_idx = idx;
            Words shifted = perform_shift(hyp, start_h, length, static_cast<std::size_t>(idx));
            Candidate candidate{pre_score - ed(shifted).first, length,
                                -static_cast<long>(start_h), -idx, std::move(shifted)};
            ++checked;
            if (!best || candidate.beats(*best)) best = std::move(candidate);
          }
        }
        if (checked >= kMaxShiftCandidates) {
          stop = true;
          break;
        }
        // ----
        if (n_h == start_h + length || n_r == start_r + length) break;
      }
    }
  }
  if (!best) {
    shifted_out = hyp;
    return 0;
  }
  shifted_out = std::move(best->shifted);
  return best->gain;
}

TerCount ter_on_ids(const Words& hyp, const Words& ref, bool shifts_enabled) {
  if (ref.empty()) return {hyp.size(), 0};
  const BeamEditDistance ed(ref);
  std::size_t shifts = 0;
  Words current = hyp;
  if (shifts_enabled) {
    int checked = 0;
    while (true) {
      Words next;
      const std::int64_t delta = best_shift(current, ref, ed, checked, next);
      if (checked >= kMaxShiftCandidates) break;
      if (delta <= 0) break;
      ++shifts;
      current = std::move(next);
    }
  }
  return {shifts + static_cast<std::size_t>(ed(current).first), ref.size()};
}

std::vector<std::u32string> ter_tokens(std::string_view text, bool case_sensitive) {
  const auto decoded = unicode::decode(text);
  const auto stripped = unicode::rstrip(decoded);
  if (stripped.empty()) return {};
  return unicode::split_whitespace(case_sensitive ? std::u32string(stripped)
                                                  : unicode::to_lower(stripped));
}

}  // namespace

TerCount ter_edits(const std::vector<std::u32string>& hyp_words,
                   const std::vector<std::u32string>& ref_words, bool shifts_enabled) {
  std::unordered_map<std::u32string, int> ids;
  const auto intern = [&](const std::vector<std::u32string>& words) {
    Words out;
    out.reserve(words.size());
    for (const auto& w : words) out.push_back(ids.emplace(w, static_cast<int>(ids.size())).first->second);
    return out;
  };
  const Words ref = intern(ref_words);
  const Words hyp = intern(hyp_words);
  return ter_on_ids(hyp, ref, shifts_enabled);
}

ItemStatistics ter_statistics(const HypothesisSet& set, const MetricConfig& cfg) {
  cfg.validate();
  ItemStatistics stats;
  stats.metric = "ter";
  stats.width = 2;
  stats.rows.reserve(set.size() * 2);
  for (const auto& item : set.items) {
    const auto count = ter_edits(ter_tokens(item.hypothesis, cfg.ter_case_sensitive),
                                 ter_tokens(item.reference, cfg.ter_case_sensitive),
                                 cfg.ter_shift_enabled);
    stats.rows.push_back(static_cast<double>(count.edits));
    stats.rows.push_back(static_cast<double>(count.ref_words));
  }
  stats.finalize = [](std::span<const double> sum) {
    if (sum[1] > 0) return 100.0 * (sum[0] / sum[1]);
    return sum[0] > 0 ? 100.0 : 0.0;
  };
  return stats;
}

double ter(const HypothesisSet& set, const MetricConfig& cfg) {
  if (set.empty()) throw Error("EMPTY_SET", "TER needs at least one item");
  return ter_statistics(set, cfg).corpus_score();
}

}  // namespace tfbench::metrics
