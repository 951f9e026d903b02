#pragma once

// Shared domain types: parameters, arrays, tuple ranking, column t-set
// enumeration, and the error type every module throws.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcaforge {

/// Stable error codes. The numeric values are mirrored by the C API.
enum class ErrorCode : int {
  Ok = 0,
  StrengthTooSmall = 1,
  AlphabetTooSmall = 2,
  MOutOfRange = 3,
  EpsilonOutOfRange = 4,
  Overflow = 5,
  SymbolOutOfRange = 6,
  RankOutOfRange = 7,
  ColumnOutOfRange = 8,
  UnsortedColumnSet = 9,
  ROutOfRange = 10,
  KTooSmallForLLL = 11,
  DomainError = 12,
  EpsilonZero = 13,
  NotPrimePower = 14,
  OrderTooLarge = 15,
  SOutOfRange = 16,
  MConditionViolated = 17,
  RNonPositive = 18,
  EmptyRange = 19,
  CapacityExceeded = 20,
  IterationCap = 21,
  MNotFull = 22,
  IoError = 23,
  ParseError = 24,
  DimensionMismatch = 25,
  InvalidArgument = 26,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

using Symbol = std::uint16_t;
using Rank = std::uint64_t;

/// Strength, shape, coverage target and defect tolerance, validated once by
/// validate() and then passed to every bound and builder.
struct PcaParams {
  int t = 2;
  int k = 2;
  int v = 2;
  std::uint64_t m = 1;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

/// Checks 2 <= t <= k, v >= 2, 1 <= m <= v^t, 0 <= epsilon <= 1 and that v^t
/// fits in 64 bits. Returns the params unchanged on success.
PcaParams validate(const PcaParams& params);

/// v^t with overflow detection (throws Overflow).
std::uint64_t checked_pow(std::uint64_t v, int t);

/// C(n, r) as an exact 64-bit integer (throws Overflow). Only for small
/// counts such as the number of column t-sets.
std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t r);

/// N x k grid of symbols in [0, v), row-major.
class Array {
 public:
  Array() = default;
  Array(std::size_t rows, std::size_t cols, int v);
  Array(std::size_t rows, std::size_t cols, int v, std::vector<Symbol> cells);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  int v() const noexcept { return v_; }

  Symbol at(std::size_t row, std::size_t col) const { return cells_[row * cols_ + col]; }
  void set(std::size_t row, std::size_t col, Symbol s);

  std::span<const Symbol> row(std::size_t r) const {
    return {cells_.data() + r * cols_, cols_};
  }
  std::span<const Symbol> cells() const noexcept { return cells_; }

  /// Appends the rows of `below` (same cols and v) under this array.
  void append(const Array& below);

  bool operator==(const Array&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  int v_ = 2;
  std::vector<Symbol> cells_;
};

Array stack(const Array& top, const Array& bottom);

/// Mixed-radix rank with tuple[0] most significant.
Rank tuple_rank(std::span<const Symbol> tuple, int v);
std::vector<Symbol> tuple_unrank(Rank rank, int t, int v);

/// Projection onto a strictly increasing column list.
Array project(const Array& a, std::span<const std::size_t> columns);

/// Lexicographic enumeration of the t-subsets of {0..k-1}.
class TSetCursor {
 public:
  TSetCursor(int k, int t);
  const std::vector<std::size_t>& columns() const noexcept { return cols_; }
  bool done() const noexcept { return done_; }
  std::uint64_t index() const noexcept { return index_; }
  void next();

 private:
  int k_;
  int t_;
  std::vector<std::size_t> cols_;
  std::uint64_t index_ = 0;
  bool done_ = false;
};

}  // namespace pcaforge
