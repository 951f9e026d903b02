#include "pcaforge/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace pcaforge::coverage {
namespace {

std::uint64_t tuple_space(int v, int t) {
  const std::uint64_t tuples = checked_pow(static_cast<std::uint64_t>(v), t);
  if (tuples > kMaxTuples) fail(ErrorCode::CapacityExceeded, "v^t exceeds presence-set capacity");
  return tuples;
}

std::uint64_t tset_space(std::size_t k, int t) {
  if (t < 1 || static_cast<std::size_t>(t) > k) {
    fail(ErrorCode::StrengthTooSmall, "need 1 <= t <= k");
  }
  const std::uint64_t n = checked_binomial(k, static_cast<std::uint64_t>(t));
  if (n > kMaxTSets) fail(ErrorCode::CapacityExceeded, "too many column t-sets");
  return n;
}

/// Fixed-capacity bitset over tuple ranks; cleared by walking the ranks that
/// were set so that a t-set costs O(N), not O(v^t).
class PresenceSet {
 public:
  explicit PresenceSet(std::uint64_t bits) : words_((bits + 63) / 64, 0) {}

  bool insert(Rank r) {
    auto& w = words_[r >> 6];
    const std::uint64_t mask = std::uint64_t{1} << (r & 63);
    if (w & mask) return false;
    w |= mask;
    touched_.push_back(r);
    return true;
  }

  void clear() {
    for (Rank r : touched_) words_[r >> 6] = 0;
    touched_.clear();
  }

 private:
  std::vector<std::uint64_t> words_;
  std::vector<Rank> touched_;
};

Rank projected_rank(const Array& a, std::size_t row, const std::vector<std::size_t>& cols) {
  Rank r = 0;
  for (std::size_t c : cols) r = r * static_cast<Rank>(a.v()) + a.at(row, c);
  return r;
}

void finish(CoverageProfile& p) {
  p.min_count = p.counts.empty() ? 0 : *std::min_element(p.counts.begin(), p.counts.end());
}

// Recursive t-subset generation, kept separate from TSetCursor so the oracle
// shares no enumeration code with the fast path.
void each_subset(std::size_t k, int t, std::size_t start, std::vector<std::size_t>& prefix,
                 const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (prefix.size() == static_cast<std::size_t>(t)) {
    fn(prefix);
    return;
  }
  for (std::size_t c = start; c < k; ++c) {
    prefix.push_back(c);
    each_subset(k, t, c + 1, prefix, fn);
    prefix.pop_back();
  }
}

Defect make_defect(const CoverageProfile& p, int k, std::uint64_t index) {
  Defect d;
  d.tset_index = index;
  d.columns = tset_columns(k, p.t, index);
  d.count = p.counts[index];
  d.missing = p.tuples - d.count;
  return d;
}

/// Calls fn(index, count) for each t-set in order until fn returns false.
template <typename Fn>
void scan_counts(const Array& a, int t, Fn&& fn) {
  PresenceSet seen(tuple_space(a.v(), t));
  tset_space(a.cols(), t);
  for (TSetCursor cur(static_cast<int>(a.cols()), t); !cur.done(); cur.next()) {
    std::uint32_t distinct = 0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (seen.insert(projected_rank(a, r, cur.columns()))) ++distinct;
    }
    seen.clear();
    if (!fn(cur.index(), distinct)) return;
  }
}

}  // namespace

std::vector<std::uint64_t> CoverageProfile::defective(std::uint64_t m) const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < m) out.push_back(i);
  }
  return out;
}

CoverageProfile coverage_profile(const Array& a, int t) {
  CoverageProfile p;
  p.t = t;
  p.tuples = tuple_space(a.v(), t);
  p.counts.reserve(tset_space(a.cols(), t));
  scan_counts(a, t, [&](std::uint64_t, std::uint32_t count) {
    p.counts.push_back(count);
    return true;
  });
  finish(p);
  return p;
}

CoverageProfile naive_oracle(const Array& a, int t) {
  CoverageProfile p;
  p.t = t;
  p.tuples = checked_pow(static_cast<std::uint64_t>(a.v()), t);
  const std::uint64_t sets = tset_space(a.cols(), t);
  const long double work = static_cast<long double>(sets) * std::max<std::size_t>(a.rows(), 1) *
                           static_cast<long double>(p.tuples);
  if (work > static_cast<long double>(kNaiveWorkLimit)) {
    fail(ErrorCode::CapacityExceeded, "instance too large for the naive oracle");
  }
  std::vector<std::size_t> prefix;
  each_subset(a.cols(), t, 0, prefix, [&](const std::vector<std::size_t>& cols) {
    std::set<std::vector<Symbol>> rows;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      std::vector<Symbol> tuple;
      for (std::size_t c : cols) tuple.push_back(a.row(r)[c]);
      rows.insert(std::move(tuple));
    }
    p.counts.push_back(static_cast<std::uint32_t>(rows.size()));
  });
  finish(p);
  return p;
}

std::optional<std::uint64_t> first_defect(const Array& a, int t, std::uint64_t m) {
  std::optional<std::uint64_t> out;
  scan_counts(a, t, [&](std::uint64_t index, std::uint32_t count) {
    if (count < m) {
      out = index;
      return false;
    }
    return true;
  });
  return out;
}

std::uint64_t count_defects(const Array& a, int t, std::uint64_t m, std::uint64_t stop_above) {
  std::uint64_t defects = 0;
  scan_counts(a, t, [&](std::uint64_t, std::uint32_t count) {
    if (count < m) ++defects;
    return defects <= stop_above;
  });
  return defects;
}

std::vector<std::size_t> tset_columns(int k, int t, std::uint64_t index) {
  // Unrank in lexicographic order by skipping blocks of C(k-c-1, t-i-1).
  std::vector<std::size_t> cols;
  std::size_t c = 0;
  for (int i = 0; i < t; ++i) {
    for (;; ++c) {
      const std::uint64_t block =
          checked_binomial(static_cast<std::uint64_t>(k) - c - 1, static_cast<std::uint64_t>(t - i - 1));
      if (index < block) break;
      index -= block;
    }
    cols.push_back(c++);
  }
  return cols;
}

PcaCheck is_pca(const CoverageProfile& profile, int k, std::uint64_t m) {
  PcaCheck out;
  out.min_count = profile.min_count;
  for (std::size_t i = 0; i < profile.counts.size(); ++i) {
    if (profile.counts[i] < m) {
      out.witness = make_defect(profile, k, i);
      return out;
    }
  }
  out.ok = true;
  return out;
}

PcaCheck is_pca(const Array& a, int t, std::uint64_t m) {
  return is_pca(coverage_profile(a, t), static_cast<int>(a.cols()), m);
}

std::uint64_t allowed_defects(double epsilon, std::uint64_t tsets) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    fail(ErrorCode::EpsilonOutOfRange, "epsilon must lie in [0, 1]");
  }
  const double raw = epsilon * static_cast<double>(tsets);
  return static_cast<std::uint64_t>(std::floor(raw * (1.0 + 1e-12)));
}

ApcaReport is_apca(const CoverageProfile& profile, int k, std::uint64_t m, double epsilon) {
  ApcaReport out;
  out.allowed = allowed_defects(epsilon, profile.counts.size());
  for (std::uint64_t i : profile.defective(m)) out.defects.push_back(make_defect(profile, k, i));
  out.ok = out.defects.size() <= out.allowed;
  return out;
}

ApcaReport is_apca(const Array& a, int t, std::uint64_t m, double epsilon) {
  return is_apca(coverage_profile(a, t), static_cast<int>(a.cols()), m, epsilon);
}

double completeness(const CoverageProfile& profile, double q) {
  if (!(q >= 0.0 && q <= 1.0)) fail(ErrorCode::InvalidArgument, "q must lie in [0, 1]");
  if (profile.counts.empty()) return 1.0;
  const double target = q * static_cast<double>(profile.tuples);
  const double nearest = std::round(target);
  const double threshold =
      std::abs(target - nearest) <= 1e-9 * std::max(1.0, target) ? nearest : std::ceil(target);
  std::uint64_t hits = 0;
  for (std::uint32_t c : profile.counts) {
    if (static_cast<double>(c) >= threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(profile.counts.size());
}

double completeness(const Array& a, double q, int t) {
  return completeness(coverage_profile(a, t), q);
}

std::vector<std::uint32_t> orbit_coverage(const Array& base, int t,
                                          const galois::OrbitStructure& structure,
                                          bool exclude_short) {
  if (structure.t != t || structure.v != base.v()) {
    fail(ErrorCode::InvalidArgument, "orbit structure does not match (t, v)");
  }
  tset_space(base.cols(), t);
  PresenceSet seen(structure.orbit_count());
  std::vector<std::uint32_t> out;
  for (TSetCursor cur(static_cast<int>(base.cols()), t); !cur.done(); cur.next()) {
    std::uint32_t covered = 0;
    for (std::size_t r = 0; r < base.rows(); ++r) {
      const std::uint32_t orbit = structure.orbit_index[projected_rank(base, r, cur.columns())];
      if (exclude_short && structure.short_orbit_id == orbit) continue;
      if (seen.insert(orbit)) ++covered;
    }
    seen.clear();
    out.push_back(covered);
  }
  return out;
}

}  // namespace pcaforge::coverage
