#pragma once

// Exhaustive coverage verification over all column t-sets.

#include <cstdint>
#include <optional>
#include <vector>

#include "pcaforge/core.hpp"
#include "pcaforge/galois.hpp"

namespace pcaforge::coverage {

/// Largest v^t handled by the presence bitsets.
inline constexpr std::uint64_t kMaxTuples = std::uint64_t{1} << 26;
/// Largest number of column t-sets a profile will hold.
inline constexpr std::uint64_t kMaxTSets = 100'000'000;
/// Work guard for the naive oracle: C(k,t) * N * v^t.
inline constexpr std::uint64_t kNaiveWorkLimit = 100'000'000;

struct CoverageProfile {
  int t = 0;
  std::uint64_t tuples = 0;              ///< v^t
  std::vector<std::uint32_t> counts;     ///< per t-set, lexicographic order
  std::uint32_t min_count = 0;

  /// Lexicographic indices of t-sets with count < m.
  std::vector<std::uint64_t> defective(std::uint64_t m) const;
};

/// Distinct-tuple count for every column t-set, one v^t-bit presence set at a
/// time.
CoverageProfile coverage_profile(const Array& a, int t);

/// Same contract as coverage_profile, computed by materializing projected
/// rows into an ordered set. Small instances only.
CoverageProfile naive_oracle(const Array& a, int t);

/// Lexicographic index of the first t-set with fewer than m distinct tuples.
std::optional<std::uint64_t> first_defect(const Array& a, int t, std::uint64_t m);

/// Number of t-sets with fewer than m distinct tuples, stopping as soon as
/// the count exceeds `stop_above`.
std::uint64_t count_defects(const Array& a, int t, std::uint64_t m, std::uint64_t stop_above);

/// Column indices of the t-set with the given lexicographic index.
std::vector<std::size_t> tset_columns(int k, int t, std::uint64_t index);

struct Defect {
  std::uint64_t tset_index = 0;
  std::vector<std::size_t> columns;
  std::uint32_t count = 0;
  std::uint64_t missing = 0;  ///< v^t - count
};

struct PcaCheck {
  bool ok = false;
  std::uint32_t min_count = 0;
  std::optional<Defect> witness;  ///< lexicographically first defective t-set
};

PcaCheck is_pca(const Array& a, int t, std::uint64_t m);
PcaCheck is_pca(const CoverageProfile& profile, int k, std::uint64_t m);

struct ApcaReport {
  bool ok = false;
  std::uint64_t allowed = 0;  ///< floor(eps * C(k,t))
  std::vector<Defect> defects;
};

/// floor(eps * C(k,t)) with a relative nudge against products like 0.1 * 10
/// landing a hair under an integer.
std::uint64_t allowed_defects(double epsilon, std::uint64_t tsets);

ApcaReport is_apca(const Array& a, int t, std::uint64_t m, double epsilon);
ApcaReport is_apca(const CoverageProfile& profile, int k, std::uint64_t m, double epsilon);

/// Fraction of t-sets whose count is at least ceil(q * v^t).
double completeness(const Array& a, double q, int t);
double completeness(const CoverageProfile& profile, double q);

/// Per t-set number of orbits with at least one member among the rows of
/// A_C. With `exclude_short`, the Frobenius short orbit is not counted.
std::vector<std::uint32_t> orbit_coverage(const Array& base, int t,
                                          const galois::OrbitStructure& structure,
                                          bool exclude_short = false);

}  // namespace pcaforge::coverage
