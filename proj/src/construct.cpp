#include "pcaforge/construct.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "pcaforge/coverage.hpp"
#include "pcaforge/galois.hpp"

namespace pcaforge::construct {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint64_t full_tuples(const PcaParams& p) {
  return checked_pow(static_cast<std::uint64_t>(p.v), p.t);
}

std::string pca_verifier(std::uint64_t m) {
  std::ostringstream os;
  os << "is_pca(m=" << m << ")";
  return os.str();
}

std::string apca_verifier(std::uint64_t m, double eps) {
  std::ostringstream os;
  os << "is_apca(m=" << m << ",eps=" << eps << ")";
  return os.str();
}

void require_pca(const Array& a, int t, std::uint64_t m) {
  if (!coverage::is_pca(a, t, m).ok) {
    fail(ErrorCode::DomainError, "internal: constructed array failed " + pca_verifier(m));
  }
}

std::uint64_t require_apca(const Array& a, int t, std::uint64_t m, double eps) {
  const auto report = coverage::is_apca(a, t, m, eps);
  if (!report.ok) {
    fail(ErrorCode::DomainError, "internal: constructed array failed " + apca_verifier(m, eps));
  }
  return report.defects.size();
}

void require_positive_epsilon(const PcaParams& p) {
  if (p.epsilon <= 0.0) fail(ErrorCode::EpsilonZero, "epsilon must be positive");
}

void require_full(const PcaParams& p) {
  if (p.m != full_tuples(p)) fail(ErrorCode::MNotFull, "this construction requires m = v^t");
}

void resample_columns(Array& a, const std::vector<std::size_t>& columns, SymbolSource& source) {
  for (std::size_t c : columns) {
    for (std::size_t r = 0; r < a.rows(); ++r) a.set(r, c, source.draw(a.v()));
  }
}

struct DevelopedSample {
  Array developed;
  std::uint64_t samples = 0;
};

/// Samples base arrays until `accept(base)` holds, then develops the winner.
DevelopedSample sample_until(std::size_t base_rows, const PcaParams& p,
                             const galois::GroupAction& action, SymbolSource& source,
                             std::uint64_t cap, const std::function<bool(const Array&)>& accept) {
  for (std::uint64_t attempt = 1; attempt <= cap; ++attempt) {
    Array base = random_array(base_rows, static_cast<std::size_t>(p.k), p.v, source);
    if (accept(base)) return {galois::develop(base, action), attempt};
  }
  fail(ErrorCode::IterationCap, "restart cap reached before an acceptable base array");
}

/// t-sets whose base projection misses at least one counted orbit.
std::uint64_t uncovered_tsets(const std::vector<std::uint32_t>& covered, std::uint64_t needed) {
  std::uint64_t bad = 0;
  for (std::uint32_t c : covered) {
    if (c < needed) ++bad;
  }
  return bad;
}

void each_subset(int limit, int max_size, std::vector<std::size_t>& prefix, std::size_t start,
                 const std::function<void(const std::vector<std::size_t>&)>& fn) {
  fn(prefix);
  if (static_cast<int>(prefix.size()) == max_size) return;
  for (std::size_t c = start; c < static_cast<std::size_t>(limit); ++c) {
    prefix.push_back(c);
    each_subset(limit, max_size, prefix, c + 1, fn);
    prefix.pop_back();
  }
}

std::vector<std::uint64_t> prefix_ranks(const Array& a, const std::vector<std::size_t>& cols) {
  std::vector<std::uint64_t> out(a.rows(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c : cols) out[r] = out[r] * static_cast<std::uint64_t>(a.v()) + a.at(r, c);
  }
  return out;
}

/// v^u * sum_y (1 - v^-u)^{cnt(y)} for a histogram of projected rows.
double survival_term(const std::vector<std::uint32_t>& histogram, int v, int u,
                     const std::vector<double>& powers) {
  double sum = 0.0;
  for (std::uint32_t c : histogram) sum += powers[c];
  return std::pow(static_cast<double>(v), u) * sum;
}

std::vector<double> survival_powers(int v, int u, std::size_t rows) {
  const double base = 1.0 - std::pow(static_cast<double>(v), -u);
  std::vector<double> powers(rows + 1);
  powers[0] = 1.0;
  for (std::size_t i = 1; i <= rows; ++i) powers[i] = powers[i - 1] * base;
  return powers;
}

}  // namespace

Symbol SymbolSource::draw(int v) {
  const auto range = static_cast<std::uint64_t>(v);
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              (std::numeric_limits<std::uint64_t>::max() % range + 1) % range;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x <= limit) return static_cast<Symbol>(x % range);
  }
}

Array random_array(std::size_t rows, std::size_t cols, int v, SymbolSource& source) {
  std::vector<Symbol> cells(rows * cols);
  for (auto& c : cells) c = source.draw(v);
  return Array(rows, cols, v, std::move(cells));
}

BuildReport build_pca_moser_tardos(const PcaParams& params, const BuildOptions& options) {
  const auto start = Clock::now();
  const PcaParams p = validate(params);
  BuildReport report;
  report.algorithm = "mt";
  report.params = p;
  report.rng_seed = p.seed;
  report.bound_used = bounds::pca_lll(p);
  report.verifier = pca_verifier(p.m);

  SymbolSource source(p.seed);
  Array a = random_array(report.bound_used.n_rows, static_cast<std::size_t>(p.k), p.v, source);
  if (p.m > 1) {
    while (auto defect = coverage::first_defect(a, p.t, p.m)) {
      if (report.iterations >= options.resample_cap) {
        fail(ErrorCode::IterationCap, "Moser-Tardos resample cap reached");
      }
      resample_columns(a, coverage::tset_columns(p.k, p.t, *defect), source);
      ++report.iterations;
    }
  }
  require_pca(a, p.t, p.m);
  report.array = std::move(a);
  report.elapsed_ms = ms_since(start);
  return report;
}

BuildReport build_apca_randomized(const PcaParams& params, const BuildOptions& options) {
  const auto start = Clock::now();
  const PcaParams p = validate(params);
  if (p.m > 1) require_positive_epsilon(p);
  BuildReport report;
  report.algorithm = "apca";
  report.params = p;
  report.rng_seed = p.seed;
  report.bound_used = bounds::apca_algorithm(p);
  report.verifier = apca_verifier(p.m, p.epsilon);

  const std::uint64_t tsets = checked_binomial(static_cast<std::uint64_t>(p.k), static_cast<std::uint64_t>(p.t));
  const std::uint64_t allowed = coverage::allowed_defects(p.epsilon, tsets);
  SymbolSource source(p.seed);
  for (;;) {
    if (report.iterations >= options.restart_cap) {
      fail(ErrorCode::IterationCap, "restart cap reached");
    }
    ++report.iterations;
    Array a = random_array(report.bound_used.n_rows, static_cast<std::size_t>(p.k), p.v, source);
    if (coverage::count_defects(a, p.t, p.m, allowed) <= allowed) {
      report.defective_count = require_apca(a, p.t, p.m, p.epsilon);
      report.array = std::move(a);
      break;
    }
  }
  report.elapsed_ms = ms_since(start);
  return report;
}

BuildReport build_apca_cyclic(const PcaParams& params, const BuildOptions& options) {
  const auto start = Clock::now();
  const PcaParams p = validate(params);
  require_positive_epsilon(p);
  require_full(p);
  BuildReport report;
  report.algorithm = "cyclic";
  report.params = p;
  report.rng_seed = p.seed;
  PcaParams halved = p;
  halved.epsilon = p.epsilon / 2;
  report.bound_used = bounds::apca_cyclic(halved);
  report.verifier = apca_verifier(p.m, p.epsilon);

  const auto action = galois::GroupAction::cyclic(p.v);
  const auto structure = galois::orbits(p.t, p.v, action);
  const std::uint64_t tsets = checked_binomial(static_cast<std::uint64_t>(p.k), static_cast<std::uint64_t>(p.t));
  const std::uint64_t allowed = coverage::allowed_defects(p.epsilon, tsets);
  const std::size_t base_rows = static_cast<std::size_t>(report.bound_used.n_rows / static_cast<std::uint64_t>(p.v));

  SymbolSource source(p.seed);
  auto sample = sample_until(base_rows, p, action, source, options.restart_cap, [&](const Array& base) {
    const auto covered = coverage::orbit_coverage(base, p.t, structure);
    return uncovered_tsets(covered, structure.orbit_count()) <= allowed;
  });
  report.iterations = sample.samples;
  report.defective_count = require_apca(sample.developed, p.t, p.m, p.epsilon);
  report.array = std::move(sample.developed);
  report.elapsed_ms = ms_since(start);
  return report;
}

BuildReport build_apca_frobenius(const PcaParams& params, const BuildOptions& options) {
  const auto start = Clock::now();
  const PcaParams p = validate(params);
  if (!galois::is_prime_power(p.v)) {
    fail(ErrorCode::NotPrimePower, "Frobenius development needs a prime-power v");
  }
  require_positive_epsilon(p);
  require_full(p);
  BuildReport report;
  report.algorithm = "frobenius";
  report.params = p;
  report.rng_seed = p.seed;
  PcaParams halved = p;
  halved.epsilon = p.epsilon / 2;
  report.bound_used = bounds::apca_frobenius(halved);
  report.verifier = apca_verifier(p.m, p.epsilon);

  const auto action = galois::GroupAction::frobenius(p.v);
  const auto structure = galois::orbits(p.t, p.v, action);
  const std::uint64_t full_orbits = structure.orbit_count() - 1;
  const std::uint64_t tsets = checked_binomial(static_cast<std::uint64_t>(p.k), static_cast<std::uint64_t>(p.t));
  const std::uint64_t allowed = coverage::allowed_defects(p.epsilon, tsets);
  const std::size_t base_rows =
      static_cast<std::size_t>(bounds::frobenius_base_rows(p.t, p.v, halved.epsilon));

  SymbolSource source(p.seed);
  auto sample = sample_until(base_rows, p, action, source, options.restart_cap, [&](const Array& base) {
    const auto covered = coverage::orbit_coverage(base, p.t, structure, true);
    return uncovered_tsets(covered, full_orbits) <= allowed;
  });
  report.iterations = sample.samples;
  Array out = stack(sample.developed, galois::constant_rows(static_cast<std::size_t>(p.k), p.v));
  report.defective_count = require_apca(out, p.t, p.m, p.epsilon);
  report.array = std::move(out);
  report.elapsed_ms = ms_since(start);
  return report;
}

BuildReport build_concat(const PcaParams& params, const BuildOptions& options) {
  const auto start = Clock::now();
  const PcaParams p = validate(params);
  const bounds::ConcatPlan plan = bounds::concat_plan(p);
  const std::uint64_t v_t = full_tuples(p);

  BuildReport report;
  report.algorithm = "concat";
  report.params = p;
  report.rng_seed = p.seed;
  report.bound_used = bounds::concat(p);
  report.verifier = pca_verifier(p.m) + " && " + apca_verifier(v_t, p.epsilon);

  PcaParams partial = p;
  partial.m = plan.m_component;
  const BuildReport top = build_pca_moser_tardos(partial, options);

  // The almost-covering part is sized from the un-halved epsilon so the total
  // stays within the concatenation bound; acceptance is judged on the stacked
  // array, whose top half only adds coverage.
  const auto action = galois::GroupAction::cyclic(p.v);
  const std::size_t base_rows = static_cast<std::size_t>(plan.almost.n_rows / static_cast<std::uint64_t>(p.v));
  SymbolSource source(p.seed ^ 0x9e3779b97f4a7c15ULL);
  Array stacked;
  auto sample = sample_until(base_rows, p, action, source, options.restart_cap, [&](const Array& base) {
    stacked = stack(top.array, galois::develop(base, action));
    return coverage::is_apca(stacked, p.t, v_t, p.epsilon).ok;
  });

  require_pca(stacked, p.t, p.m);
  report.defective_count = require_apca(stacked, p.t, v_t, p.epsilon);
  report.iterations = top.iterations + sample.samples;
  report.array = std::move(stacked);
  report.elapsed_ms = ms_since(start);
  return report;
}

double pessimistic_estimate(const Array& prefix, int k, int t) {
  const int fixed = static_cast<int>(prefix.cols());
  if (fixed > k) fail(ErrorCode::InvalidArgument, "prefix has more than k columns");
  const int v = prefix.v();
  double total = 0.0;
  std::vector<std::size_t> subset;
  each_subset(fixed, t, subset, 0, [&](const std::vector<std::size_t>& cols) {
    const int u = t - static_cast<int>(cols.size());
    if (u > k - fixed) return;
    const double weight = std::exp(bounds::log_binomial(static_cast<std::uint64_t>(k - fixed),
                                                        static_cast<std::uint64_t>(u)));
    std::vector<std::uint32_t> histogram(checked_pow(static_cast<std::uint64_t>(v), static_cast<int>(cols.size())), 0);
    for (std::uint64_t r : prefix_ranks(prefix, cols)) ++histogram[r];
    total += std::round(weight) * survival_term(histogram, v, u, survival_powers(v, u, prefix.rows()));
  });
  return total;
}

Array derandomize_columns(std::size_t rows, int t, int k, int v, std::vector<double>* trace) {
  if (t < 1 || k < t) fail(ErrorCode::StrengthTooSmall, "need 1 <= t <= k");
  const double choices = std::pow(static_cast<double>(v), static_cast<double>(rows));
  if (choices > static_cast<double>(kMaxColumnChoices)) {
    fail(ErrorCode::CapacityExceeded, "v^N column choices exceed the derandomization limit");
  }
  const auto candidates = static_cast<std::uint64_t>(choices);

  Array a(rows, 0, v);
  if (trace) {
    trace->clear();
    trace->push_back(pessimistic_estimate(a, k, t));
  }
  std::vector<Symbol> column(rows);
  for (int j = 0; j < k; ++j) {
    struct Group {
      std::vector<std::uint64_t> ranks;  // per row, over the fixed part
      std::size_t cells;                 // v^{|F|}
      double weight;
      double scale;                      // v^u
      std::vector<double> powers;
    };
    std::vector<Group> groups;
    std::vector<std::size_t> subset;
    each_subset(j, t - 1, subset, 0, [&](const std::vector<std::size_t>& cols) {
      const int u = t - static_cast<int>(cols.size()) - 1;
      if (u > k - j - 1) return;
      Group g;
      g.ranks = prefix_ranks(a, cols);
      g.cells = static_cast<std::size_t>(checked_pow(static_cast<std::uint64_t>(v), static_cast<int>(cols.size()) + 1));
      g.weight = std::round(std::exp(bounds::log_binomial(static_cast<std::uint64_t>(k - j - 1),
                                                          static_cast<std::uint64_t>(u))));
      g.scale = std::pow(static_cast<double>(v), u);
      g.powers = survival_powers(v, u, rows);
      groups.push_back(std::move(g));
    });

    double best = std::numeric_limits<double>::infinity();
    std::vector<Symbol> best_column(rows, 0);
    std::vector<std::uint32_t> histogram;
    for (std::uint64_t cand = 0; cand < candidates; ++cand) {
      std::uint64_t x = cand;
      for (std::size_t r = rows; r-- > 0;) {
        column[r] = static_cast<Symbol>(x % static_cast<std::uint64_t>(v));
        x /= static_cast<std::uint64_t>(v);
      }
      double score = 0.0;
      for (const Group& g : groups) {
        histogram.assign(g.cells, 0);
        for (std::size_t r = 0; r < rows; ++r) {
          ++histogram[g.ranks[r] * static_cast<std::uint64_t>(v) + column[r]];
        }
        double sum = 0.0;
        for (std::uint32_t c : histogram) sum += g.powers[c];
        score += g.weight * g.scale * sum;
      }
      if (cand == 0 || score < best - 1e-12 * std::abs(best)) {
        best = score;
        best_column = column;
      }
    }

    Array next(rows, static_cast<std::size_t>(j + 1), v);
    for (std::size_t r = 0; r < rows; ++r) {
      for (int c = 0; c < j; ++c) next.set(r, static_cast<std::size_t>(c), a.at(r, static_cast<std::size_t>(c)));
      next.set(r, static_cast<std::size_t>(j), best_column[r]);
    }
    a = std::move(next);
    if (trace) trace->push_back(pessimistic_estimate(a, k, t));
  }
  return a;
}

BuildReport build_apca_derandomized(const PcaParams& params) {
  const auto start = Clock::now();
  const PcaParams p = validate(params);
  require_positive_epsilon(p);
  require_full(p);
  BuildReport report;
  report.algorithm = "derand";
  report.params = p;
  report.rng_seed = p.seed;
  report.bound_used = bounds::apca(p);
  report.verifier = apca_verifier(p.m, p.epsilon);
  report.array = derandomize_columns(report.bound_used.n_rows, p.t, p.k, p.v, &report.estimator_trace);
  report.defective_count = require_apca(report.array, p.t, p.m, p.epsilon);
  report.elapsed_ms = ms_since(start);
  return report;
}

const char* algorithm_label(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::MoserTardos: return "mt";
    case Algorithm::Apca: return "apca";
    case Algorithm::Cyclic: return "cyclic";
    case Algorithm::Frobenius: return "frobenius";
    case Algorithm::Concat: return "concat";
    case Algorithm::Derandomized: return "derand";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::MoserTardos, Algorithm::Apca, Algorithm::Cyclic, Algorithm::Frobenius,
                      Algorithm::Concat, Algorithm::Derandomized}) {
    if (name == algorithm_label(a)) return a;
  }
  return std::nullopt;
}

BuildReport build(Algorithm a, const PcaParams& params, const BuildOptions& options) {
  switch (a) {
    case Algorithm::MoserTardos: return build_pca_moser_tardos(params, options);
    case Algorithm::Apca: return build_apca_randomized(params, options);
    case Algorithm::Cyclic: return build_apca_cyclic(params, options);
    case Algorithm::Frobenius: return build_apca_frobenius(params, options);
    case Algorithm::Concat: return build_concat(params, options);
    case Algorithm::Derandomized: return build_apca_derandomized(params);
  }
  fail(ErrorCode::InvalidArgument, "unknown algorithm");
}

}  // namespace pcaforge::construct
