#include "pcaforge/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pcaforge/galois.hpp"

namespace pcaforge::bounds {
namespace {

constexpr double kSnapTolerance = 1e-9;
// Above this many factors the summed-log route is replaced by log-gamma.
constexpr std::uint64_t kSummedLogLimit = 1u << 20;

double tuples(const PcaParams& p) {
  return static_cast<double>(checked_pow(static_cast<std::uint64_t>(p.v), p.t));
}

std::uint64_t tuples_exact(const PcaParams& p) {
  return checked_pow(static_cast<std::uint64_t>(p.v), p.t);
}

/// ln(v^t / (m-1)) for 2 <= m <= v^t.
double log_ratio(const PcaParams& p) {
  return std::log(tuples(p)) - std::log(static_cast<double>(p.m - 1));
}

BoundResult degenerate(const char* source) { return {0.0, 1, source}; }

void require_epsilon(const PcaParams& p) {
  if (p.epsilon <= 0.0) {
    fail(ErrorCode::EpsilonZero, "epsilon must be positive for almost-covering bounds");
  }
}

void require_full(const PcaParams& p) {
  if (p.m != tuples_exact(p)) {
    fail(ErrorCode::MNotFull, "this bound requires m = v^t");
  }
}

std::uint64_t to_rows(std::uint64_t n) { return std::max<std::uint64_t>(n, 1); }

}  // namespace

double log_binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) fail(ErrorCode::ROutOfRange, "log_binomial requires 0 <= r <= n");
  const std::uint64_t small = std::min(r, n - r);
  if (small == 0) return 0.0;
  if (small <= kSummedLogLimit) {
    // ln C(n, s) = sum_{i=1..s} ln(1 + (n - s) / i)
    const long double rest = static_cast<long double>(n - small);
    long double acc = 0.0L;
    for (std::uint64_t i = 1; i <= small; ++i) {
      acc += std::log1p(rest / static_cast<long double>(i));
    }
    return static_cast<double>(acc);
  }
  const long double nn = static_cast<long double>(n);
  const long double rr = static_cast<long double>(r);
  return static_cast<double>(std::lgamma(nn + 1) - std::lgamma(rr + 1) -
                             std::lgamma(nn - rr + 1));
}

std::uint64_t min_rows_above(double x, bool strict) {
  if (std::isnan(x)) fail(ErrorCode::DomainError, "bound evaluated to NaN");
  if (std::isinf(x)) {
    if (x < 0) return 0;
    fail(ErrorCode::Overflow, "bound is infinite");
  }
  if (x < 0) return 0;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= kSnapTolerance * std::max(1.0, std::abs(x))) {
    x = nearest;
  }
  if (x >= static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2)) {
    fail(ErrorCode::Overflow, "row count does not fit in 64 bits");
  }
  const double fl = std::floor(x);
  const auto base = static_cast<std::uint64_t>(fl);
  if (fl == x) return strict ? base + 1 : base;
  return base + 1;
}

BoundResult pca_union(const PcaParams& params) {
  const PcaParams p = validate(params);
  if (p.m == 1) return degenerate("union");
  const std::uint64_t v_t = tuples_exact(p);
  const double numer = log_binomial(static_cast<std::uint64_t>(p.k), static_cast<std::uint64_t>(p.t)) +
                       log_binomial(v_t, p.m - 1);
  const double x = numer / log_ratio(p);
  return {x, to_rows(min_rows_above(x, true)), "union"};
}

BoundResult pca_lll(const PcaParams& params) {
  const PcaParams p = validate(params);
  if (p.m == 1) return degenerate("lll");
  if (p.k < 2 * p.t) {
    fail(ErrorCode::KTooSmallForLLL, "the local-lemma bound requires k >= 2t");
  }
  const std::uint64_t v_t = tuples_exact(p);
  const double numer = 1.0 + std::log(static_cast<double>(p.t)) +
                       log_binomial(static_cast<std::uint64_t>(p.k), static_cast<std::uint64_t>(p.t - 1)) +
                       log_binomial(v_t, p.m - 1);
  const double x = numer / log_ratio(p);
  return {x, to_rows(min_rows_above(x, false)), "lll"};
}

double pca_asymptotic(int t, int v, double k, std::uint64_t r) {
  if (!(k > 1.0)) fail(ErrorCode::DomainError, "ln k must be positive");
  if (r < 1) fail(ErrorCode::DomainError, "r must be at least 1");
  if (!(k > static_cast<double>(r))) fail(ErrorCode::DomainError, "requires k > r");
  const double v_t = static_cast<double>(checked_pow(static_cast<std::uint64_t>(v), t));
  const double ln_k = std::log(k);
  const double ln_r = std::log(static_cast<double>(r));
  return v_t * (t - 1) * ln_k / static_cast<double>(r) * (1.0 - ln_r / ln_k);
}

double pca_asymptotic(const PcaParams& params) {
  const PcaParams p = validate(params);
  const std::uint64_t r = tuples_exact(p) - p.m + 1;
  return pca_asymptotic(p.t, p.v, static_cast<double>(p.k), r);
}

BoundResult apca(const PcaParams& params) {
  const PcaParams p = validate(params);
  if (p.m == 1) return degenerate("apca");
  require_epsilon(p);
  const double x = (log_binomial(tuples_exact(p), p.m - 1) - std::log(p.epsilon)) / log_ratio(p);
  return {x, to_rows(min_rows_above(x, false)), "apca"};
}

BoundResult apca_algorithm(const PcaParams& params) {
  const PcaParams p = validate(params);
  if (p.m == 1) return degenerate("apca-algorithm");
  require_epsilon(p);
  const double x = (std::log(2.0) + log_binomial(tuples_exact(p), p.m - 1) - std::log(p.epsilon)) /
                   log_ratio(p);
  return {x, to_rows(min_rows_above(x, false)), "apca-algorithm"};
}

std::uint64_t cyclic_base_rows(int t, int v, double eps) {
  if (eps <= 0.0) fail(ErrorCode::EpsilonZero, "epsilon must be positive");
  const double orbits = static_cast<double>(checked_pow(static_cast<std::uint64_t>(v), t - 1));
  if (orbits <= eps) return 0;
  const double x = std::log(orbits / eps) / -std::log1p(-1.0 / orbits);
  return min_rows_above(x, false);
}

BoundResult apca_cyclic(const PcaParams& params) {
  const PcaParams p = validate(params);
  require_epsilon(p);
  require_full(p);
  const double orbits = static_cast<double>(checked_pow(static_cast<std::uint64_t>(p.v), p.t - 1));
  const double closed = tuples(p) * std::log(orbits / p.epsilon);
  const std::uint64_t n = cyclic_base_rows(p.t, p.v, p.epsilon);
  return {closed, static_cast<std::uint64_t>(p.v) * n, "apca-cyclic"};
}

std::uint64_t frobenius_base_rows(int t, int v, double eps) {
  if (eps <= 0.0) fail(ErrorCode::EpsilonZero, "epsilon must be positive");
  const std::uint64_t w = checked_pow(static_cast<std::uint64_t>(v), t - 1);
  const double full_orbits = static_cast<double>((w - 1) / static_cast<std::uint64_t>(v - 1));
  if (full_orbits <= eps) return 0;
  const double miss = static_cast<double>(v - 1) / static_cast<double>(w);
  const double x = std::log(full_orbits / eps) / -std::log1p(-miss);
  return min_rows_above(x, false);
}

BoundResult apca_frobenius(const PcaParams& params) {
  const PcaParams p = validate(params);
  if (!galois::is_prime_power(p.v)) {
    fail(ErrorCode::NotPrimePower, "Frobenius development needs a prime-power v");
  }
  require_epsilon(p);
  require_full(p);
  const double vd = static_cast<double>(p.v);
  const double closed =
      tuples(p) * std::log(2.0 * std::pow(vd, p.t - 2) / p.epsilon) + vd;
  const std::uint64_t n = frobenius_base_rows(p.t, p.v, p.epsilon);
  const auto v64 = static_cast<std::uint64_t>(p.v);
  return {closed, v64 * (v64 - 1) * n + v64, "apca-frobenius"};
}

std::uint64_t cyclic_orbit_slack(const PcaParams& params) {
  const PcaParams p = validate(params);
  const std::uint64_t missing = tuples_exact(p) - p.m + 1;
  const auto v64 = static_cast<std::uint64_t>(p.v);
  return (missing + v64 - 1) / v64;
}

BoundResult pca_cyclic(const PcaParams& params, bool with_t) {
  const PcaParams p = validate(params);
  const std::uint64_t s = cyclic_orbit_slack(p);
  const std::uint64_t w = checked_pow(static_cast<std::uint64_t>(p.v), p.t - 1);
  if (s < 1 || s >= w) {
    std::ostringstream os;
    os << "orbit slack s = " << s << " must satisfy 1 <= s < v^(t-1) = " << w;
    fail(ErrorCode::SOutOfRange, os.str());
  }
  double numer = 1.0 + log_binomial(static_cast<std::uint64_t>(p.k), static_cast<std::uint64_t>(p.t - 1)) +
                 log_binomial(w, s);
  if (with_t) numer += std::log(static_cast<double>(p.t));
  const double inner = numer / -std::log1p(-static_cast<double>(s) / static_cast<double>(w));
  const auto v64 = static_cast<std::uint64_t>(p.v);
  return {static_cast<double>(p.v) * inner, v64 * to_rows(min_rows_above(inner, false)),
          with_t ? "pca-cyclic-with-t" : "pca-cyclic"};
}

ConcatPlan concat_plan(const PcaParams& params) {
  const PcaParams p = validate(params);
  require_epsilon(p);
  const double denom = std::log(static_cast<double>(p.v)) - std::log(p.epsilon) / (p.t - 1);
  if (!(denom > 0.0)) {
    fail(ErrorCode::RNonPositive, "ln(v / eps^(1/(t-1))) must be positive");
  }
  ConcatPlan plan;
  plan.r_real = std::log(static_cast<double>(p.k)) / denom;
  const std::uint64_t v_t = tuples_exact(p);
  const double limit = static_cast<double>(v_t) + 1.0 - plan.r_real;
  if (static_cast<double>(p.m) > limit + kSnapTolerance * std::max(1.0, limit)) {
    std::ostringstream os;
    os << "m = " << p.m << " exceeds v^t + 1 - r = " << limit;
    fail(ErrorCode::MConditionViolated, os.str());
  }
  double r_snapped = plan.r_real;
  if (std::abs(r_snapped - std::round(r_snapped)) <= kSnapTolerance * std::max(1.0, r_snapped)) {
    r_snapped = std::round(r_snapped);
  }
  if (r_snapped < 1.0) {
    fail(ErrorCode::RNonPositive, "ln k / ln(v / eps^(1/(t-1))) rounds down below 1");
  }
  plan.r = static_cast<std::uint64_t>(std::floor(r_snapped));
  plan.m_component = plan.r >= v_t ? 1 : v_t - plan.r + 1;

  PcaParams partial = p;
  partial.m = plan.m_component;
  plan.partial = pca_lll(partial);

  PcaParams almost = p;
  almost.m = v_t;
  plan.almost = apca_cyclic(almost);
  return plan;
}

BoundResult concat(const PcaParams& params) {
  const ConcatPlan plan = concat_plan(params);
  return {plan.partial.real_bound + plan.almost.real_bound,
          plan.partial.n_rows + plan.almost.n_rows, "concat"};
}

ReferenceBounds can_reference(int t, int k, int v) {
  const double log_k = std::log2(static_cast<double>(k));
  const double vd = static_cast<double>(v);
  return {(t - 1) * std::pow(vd, t) * log_k, std::pow(vd, t - 1) * log_k};
}

const char* formula_label(Formula f) noexcept {
  switch (f) {
    case Formula::Union: return "union";
    case Formula::Lll: return "lll";
    case Formula::Apca: return "apca";
    case Formula::ApcaAlgorithm: return "apca-algorithm";
    case Formula::ApcaCyclic: return "apca-cyclic";
    case Formula::ApcaFrobenius: return "apca-frobenius";
    case Formula::PcaCyclic: return "pca-cyclic";
    case Formula::PcaCyclicWithT: return "pca-cyclic-with-t";
    case Formula::Concat: return "concat";
  }
  return "unknown";
}

std::optional<Formula> parse_formula(const std::string& name) {
  static const std::pair<const char*, Formula> table[] = {
      {"union", Formula::Union},
      {"eq5", Formula::Union},
      {"lll", Formula::Lll},
      {"eq6", Formula::Lll},
      {"apca", Formula::Apca},
      {"apca-algorithm", Formula::ApcaAlgorithm},
      {"apca-cyclic", Formula::ApcaCyclic},
      {"apca-frobenius", Formula::ApcaFrobenius},
      {"pca-cyclic", Formula::PcaCyclic},
      {"eq8", Formula::PcaCyclic},
      {"pca-cyclic-with-t", Formula::PcaCyclicWithT},
      {"concat", Formula::Concat},
  };
  for (const auto& [label, f] : table) {
    if (name == label) return f;
  }
  return std::nullopt;
}

BoundResult evaluate(Formula f, const PcaParams& params) {
  switch (f) {
    case Formula::Union: return pca_union(params);
    case Formula::Lll: return pca_lll(params);
    case Formula::Apca: return apca(params);
    case Formula::ApcaAlgorithm: return apca_algorithm(params);
    case Formula::ApcaCyclic: return apca_cyclic(params);
    case Formula::ApcaFrobenius: return apca_frobenius(params);
    case Formula::PcaCyclic: return pca_cyclic(params, false);
    case Formula::PcaCyclicWithT: return pca_cyclic(params, true);
    case Formula::Concat: return concat(params);
  }
  fail(ErrorCode::InvalidArgument, "unknown formula");
}

BoundSweep sweep(const std::vector<Formula>& formulas, Axis axis, std::uint64_t first,
                 std::uint64_t last, std::uint64_t step, const PcaParams& fixed) {
  if (formulas.empty() || first > last || step == 0) {
    fail(ErrorCode::EmptyRange, "sweep needs formulas and a non-empty range");
  }
  BoundSweep out;
  out.axis = axis;
  for (std::uint64_t value = first;; value += step) {
    PcaParams p = fixed;
    if (axis == Axis::M) {
      p.m = value;
    } else {
      p.k = static_cast<int>(value);
    }
    SweepPoint point{value, {}};
    for (Formula f : formulas) {
      SweepCell cell{f, std::nullopt, {}};
      try {
        cell.result = evaluate(f, p);
      } catch (const Error& e) {
        cell.gap_reason = error_name(e.code());
      }
      point.cells.push_back(std::move(cell));
    }
    out.points.push_back(std::move(point));
    if (last - value < step) break;
  }
  return out;
}

}  // namespace pcaforge::bounds
