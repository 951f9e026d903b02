#pragma once

// Randomized and derandomized builders. Every builder verifies its output
// with the coverage module before returning it.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pcaforge/bounds.hpp"
#include "pcaforge/core.hpp"

namespace pcaforge::construct {

/// Seeded symbol stream: std::mt19937_64 (its output sequence is fixed by
/// the C++ standard) with unbiased rejection sampling for values in [0, v).
class SymbolSource {
 public:
  explicit SymbolSource(std::uint64_t seed) : engine_(seed) {}
  Symbol draw(int v);

 private:
  std::mt19937_64 engine_;
};

/// rows x cols array filled row-major from `source`.
Array random_array(std::size_t rows, std::size_t cols, int v, SymbolSource& source);

struct BuildOptions {
  std::uint64_t resample_cap = 1'000'000;  ///< Moser-Tardos resamples
  std::uint64_t restart_cap = 64;          ///< whole-array restarts
};

struct BuildReport {
  std::string algorithm;
  PcaParams params;
  Array array;
  /// Resamples (Moser-Tardos) or sampled arrays (restart loops). For the
  /// concatenation it is the sum over both components.
  std::uint64_t iterations = 0;
  std::uint64_t rng_seed = 0;
  bounds::BoundResult bound_used;
  std::string verifier;
  std::uint64_t defective_count = 0;  ///< full count at acceptance
  double elapsed_ms = 0.0;
  std::vector<double> estimator_trace;  ///< derandomized builder only
};

BuildReport build_pca_moser_tardos(const PcaParams& params, const BuildOptions& options = {});
BuildReport build_apca_randomized(const PcaParams& params, const BuildOptions& options = {});
BuildReport build_apca_cyclic(const PcaParams& params, const BuildOptions& options = {});
BuildReport build_apca_frobenius(const PcaParams& params, const BuildOptions& options = {});
BuildReport build_concat(const PcaParams& params, const BuildOptions& options = {});
BuildReport build_apca_derandomized(const PcaParams& params);

/// Largest v^N the derandomized builder will enumerate per column.
inline constexpr std::uint64_t kMaxColumnChoices = std::uint64_t{1} << 20;

/// Expected number of (t-set, tuple) pairs missing from a uniformly random
/// completion of `prefix` (an N x j array, j <= k) to k columns.
double pessimistic_estimate(const Array& prefix, int k, int t);

/// Fixes k columns of an N-row array left to right, each chosen among all v^N
/// columns to minimize pessimistic_estimate (ties: lexicographically smallest
/// column, row 0 most significant). `trace` receives the estimate before any
/// column and after each column.
Array derandomize_columns(std::size_t rows, int t, int k, int v, std::vector<double>* trace = nullptr);

enum class Algorithm { MoserTardos, Apca, Cyclic, Frobenius, Concat, Derandomized };

const char* algorithm_label(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(const std::string& name);
BuildReport build(Algorithm a, const PcaParams& params, const BuildOptions& options = {});

}  // namespace pcaforge::construct
