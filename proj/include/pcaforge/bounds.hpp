#pragma once

// Existence bounds for partial and almost-partial covering arrays, all
// evaluated in log space. Each BoundResult carries the real-valued bound and
// the smallest integer row count satisfying the underlying inequality.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcaforge/core.hpp"

namespace pcaforge::bounds {

struct BoundResult {
  double real_bound = 0.0;
  std::uint64_t n_rows = 0;
  std::string source;
};

/// ln C(n, r) without forming the integer binomial.
double log_binomial(std::uint64_t n, std::uint64_t r);

/// Smallest integer N with N > x (strict) or N >= x. Values of x within
/// 1e-9 relative of an integer are snapped to that integer first.
std::uint64_t min_rows_above(double x, bool strict);

/// Union bound: C(k,t) C(v^t,r) ((m-1)/v^t)^N < 1.
BoundResult pca_union(const PcaParams& params);

/// Local-lemma bound: e C(v^t,r) ((m-1)/v^t)^N t C(k,t-1) <= 1. Needs k >= 2t.
BoundResult pca_lll(const PcaParams& params);

/// Informational large-k approximation of the local-lemma bound for
/// r = v^t - m + 1 missing tuples. `k` is real so ln k can be any positive value.
double pca_asymptotic(int t, int v, double k, std::uint64_t r);
double pca_asymptotic(const PcaParams& params);

/// Almost-partial bound: C(v^t,r) ((m-1)/v^t)^N <= epsilon.
BoundResult apca(const PcaParams& params);

/// Row count used by the randomized almost-partial builder: the same
/// inequality with epsilon replaced by epsilon/2.
BoundResult apca_algorithm(const PcaParams& params);

/// Full coverage (m = v^t) via cyclic development. real_bound is the closed
/// form v^t ln(v^{t-1}/eps); n_rows = v * n for the minimal base size n.
BoundResult apca_cyclic(const PcaParams& params);
/// Minimal base size n with v^{t-1} (1 - 1/v^{t-1})^n <= eps.
std::uint64_t cyclic_base_rows(int t, int v, double eps);

/// Full coverage via Frobenius development plus v constant rows.
BoundResult apca_frobenius(const PcaParams& params);
/// Minimal base size n with ((v^{t-1}-1)/(v-1)) (1 - (v-1)/v^{t-1})^n <= eps.
std::uint64_t frobenius_base_rows(int t, int v, double eps);

/// Partial coverage through cyclic development of a base array that misses
/// at most s-1 orbits. `with_t` adds the factor t inside the logarithm.
BoundResult pca_cyclic(const PcaParams& params, bool with_t = false);
/// s = ceil((v^t - m + 1) / v).
std::uint64_t cyclic_orbit_slack(const PcaParams& params);

/// Pieces of the concatenation bound: a partial array at m_component plus a
/// cyclic almost-covering array.
struct ConcatPlan {
  double r_real = 0.0;
  std::uint64_t r = 0;
  std::uint64_t m_component = 0;
  BoundResult partial;
  BoundResult almost;
};
ConcatPlan concat_plan(const PcaParams& params);
BoundResult concat(const PcaParams& params);

struct ReferenceBounds {
  double upper = 0.0;
  double lower = 0.0;
};
/// (t-1) v^t log2 k and v^{t-1} log2 k, with the o(1) terms dropped.
ReferenceBounds can_reference(int t, int k, int v);

enum class Formula {
  Union,
  Lll,
  Apca,
  ApcaAlgorithm,
  ApcaCyclic,
  ApcaFrobenius,
  PcaCyclic,
  PcaCyclicWithT,
  Concat,
};

const char* formula_label(Formula f) noexcept;
std::optional<Formula> parse_formula(const std::string& name);
BoundResult evaluate(Formula f, const PcaParams& params);

enum class Axis { M, K };

struct SweepCell {
  Formula formula;
  std::optional<BoundResult> result;  ///< nullopt marks a precondition gap
  std::string gap_reason;
};

struct SweepPoint {
  std::uint64_t value;
  std::vector<SweepCell> cells;
};

struct BoundSweep {
  Axis axis = Axis::M;
  std::vector<SweepPoint> points;
};

/// Evaluates every formula at every axis value in [first, last] (step >= 1),
/// with the other parameters taken from `fixed`.
BoundSweep sweep(const std::vector<Formula>& formulas, Axis axis, std::uint64_t first,
                 std::uint64_t last, std::uint64_t step, const PcaParams& fixed);

}  // namespace pcaforge::bounds
