#pragma once

// Text formats: arrays (`pca-forge v1`), bound sweeps and defect lists as CSV,
// build reports as JSON.
//
// Array file layout, LF line endings, no trailing whitespace:
//
//   pca-forge v1
//   N k v base [t=T] [m=M] [eps=E]
//   N lines of k space-separated symbols in [base, base + v)

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcaforge/bounds.hpp"
#include "pcaforge/construct.hpp"
#include "pcaforge/core.hpp"
#include "pcaforge/coverage.hpp"

namespace pcaforge::io {

inline constexpr const char* kMagic = "pca-forge v1";

/// Optional coverage claims stored next to the dimensions.
struct Claims {
  std::optional<int> t;
  std::optional<std::uint64_t> m;
  std::optional<double> epsilon;
};

struct ArrayFileHeader {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int v = 2;
  int base = 0;
  Claims claims;
};

struct WriteOptions {
  int base = 0;  ///< 0 or 1
  Claims claims;
};

struct LoadedArray {
  ArrayFileHeader header;
  Array array;  ///< always 0-based in memory
};

std::string format_array(const Array& a, const WriteOptions& options = {});
LoadedArray parse_array(const std::string& text);

void write_array(const Array& a, const std::string& path, const WriteOptions& options = {});
LoadedArray read_array(const std::string& path);

/// `axis,formula,real_bound,n_rows,feasible`; the axis column holds the axis
/// value and gaps are written as `value,label,,,0`.
std::string format_sweep_csv(const bounds::BoundSweep& sweep);
void write_sweep_csv(const bounds::BoundSweep& sweep, const std::string& path);

/// `tset_indices,count,missing`; tset_indices joins the columns with ';'.
std::string format_defects_csv(const std::vector<coverage::Defect>& defects);
void write_defects_csv(const std::vector<coverage::Defect>& defects, const std::string& path);

std::string format_report_json(const construct::BuildReport& report);
void write_report_json(const construct::BuildReport& report, const std::string& path);

/// Six significant digits, printf %.6g.
std::string format_real(double x);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace pcaforge::io
