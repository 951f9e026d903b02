#include "pcaforge/core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pcaforge {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::StrengthTooSmall: return "StrengthTooSmall";
    case ErrorCode::AlphabetTooSmall: return "AlphabetTooSmall";
    case ErrorCode::MOutOfRange: return "MOutOfRange";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::SymbolOutOfRange: return "SymbolOutOfRange";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::ColumnOutOfRange: return "ColumnOutOfRange";
    case ErrorCode::UnsortedColumnSet: return "UnsortedColumnSet";
    case ErrorCode::ROutOfRange: return "ROutOfRange";
    case ErrorCode::KTooSmallForLLL: return "KTooSmallForLLL";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EpsilonZero: return "EpsilonZero";
    case ErrorCode::NotPrimePower: return "NotPrimePower";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::SOutOfRange: return "SOutOfRange";
    case ErrorCode::MConditionViolated: return "MConditionViolated";
    case ErrorCode::RNonPositive: return "RNonPositive";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::IterationCap: return "IterationCap";
    case ErrorCode::MNotFull: return "MNotFull";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(error_name(code)) + ": " + message);
}

std::uint64_t checked_pow(std::uint64_t v, int t) {
  std::uint64_t out = 1;
  for (int i = 0; i < t; ++i) {
    if (v != 0 && out > std::numeric_limits<std::uint64_t>::max() / v) {
      fail(ErrorCode::Overflow, "v^t does not fit in 64 bits");
    }
    out *= v;
  }
  return out;
}

std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  if (r > n - r) r = n - r;
  // out * (n - r + i) / i stays exact because each prefix is itself C(n-r+i, i).
  unsigned __int128 out = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    out = out * (n - r + i) / i;
    if (out > std::numeric_limits<std::uint64_t>::max()) {
      fail(ErrorCode::Overflow, "binomial coefficient does not fit in 64 bits");
    }
  }
  return static_cast<std::uint64_t>(out);
}

PcaParams validate(const PcaParams& p) {
  if (p.t < 2) fail(ErrorCode::StrengthTooSmall, "t must be at least 2");
  if (p.k < p.t) fail(ErrorCode::StrengthTooSmall, "k must be at least t");
  if (p.v < 2) fail(ErrorCode::AlphabetTooSmall, "v must be at least 2");
  if (p.v > std::numeric_limits<Symbol>::max()) {
    fail(ErrorCode::Overflow, "v exceeds the symbol type");
  }
  const std::uint64_t tuples = checked_pow(static_cast<std::uint64_t>(p.v), p.t);
  if (p.m < 1 || p.m > tuples) {
    std::ostringstream os;
    os << "m must lie in [1, v^t] = [1, " << tuples << "], got " << p.m;
    fail(ErrorCode::MOutOfRange, os.str());
  }
  if (!(p.epsilon >= 0.0 && p.epsilon <= 1.0)) {
    fail(ErrorCode::EpsilonOutOfRange, "epsilon must lie in [0, 1]");
  }
  return p;
}

Array::Array(std::size_t rows, std::size_t cols, int v)
    : rows_(rows), cols_(cols), v_(v), cells_(rows * cols, 0) {
  if (v < 2) fail(ErrorCode::AlphabetTooSmall, "v must be at least 2");
}

Array::Array(std::size_t rows, std::size_t cols, int v, std::vector<Symbol> cells)
    : rows_(rows), cols_(cols), v_(v), cells_(std::move(cells)) {
  if (v < 2) fail(ErrorCode::AlphabetTooSmall, "v must be at least 2");
  if (cells_.size() != rows * cols) {
    fail(ErrorCode::DimensionMismatch, "cell count does not equal rows * cols");
  }
  for (Symbol s : cells_) {
    if (s >= v) fail(ErrorCode::SymbolOutOfRange, "cell symbol >= v");
  }
}

void Array::set(std::size_t row, std::size_t col, Symbol s) {
  if (s >= v_) fail(ErrorCode::SymbolOutOfRange, "cell symbol >= v");
  cells_[row * cols_ + col] = s;
}

void Array::append(const Array& below) {
  if (below.rows_ == 0) return;
  if (rows_ == 0 && cols_ == 0) {
    *this = below;
    return;
  }
  if (below.cols_ != cols_ || below.v_ != v_) {
    fail(ErrorCode::DimensionMismatch, "stacked arrays must share k and v");
  }
  cells_.insert(cells_.end(), below.cells_.begin(), below.cells_.end());
  rows_ += below.rows_;
}

Array stack(const Array& top, const Array& bottom) {
  Array out = top;
  out.append(bottom);
  return out;
}

Rank tuple_rank(std::span<const Symbol> tuple, int v) {
  Rank r = 0;
  for (Symbol s : tuple) {
    if (s >= v) fail(ErrorCode::SymbolOutOfRange, "tuple coordinate >= v");
    r = r * static_cast<Rank>(v) + s;
  }
  return r;
}

std::vector<Symbol> tuple_unrank(Rank rank, int t, int v) {
  const std::uint64_t total = checked_pow(static_cast<std::uint64_t>(v), t);
  if (rank >= total) fail(ErrorCode::RankOutOfRange, "rank >= v^t");
  std::vector<Symbol> out(static_cast<std::size_t>(t));
  for (int i = t - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<Symbol>(rank % static_cast<Rank>(v));
    rank /= static_cast<Rank>(v);
  }
  return out;
}

Array project(const Array& a, std::span<const std::size_t> columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] >= a.cols()) fail(ErrorCode::ColumnOutOfRange, "column index >= k");
    if (i > 0 && columns[i] <= columns[i - 1]) {
      fail(ErrorCode::UnsortedColumnSet, "column set must be strictly increasing");
    }
  }
  std::vector<Symbol> cells;
  cells.reserve(a.rows() * columns.size());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c : columns) cells.push_back(a.at(r, c));
  }
  return Array(a.rows(), columns.size(), a.v(), std::move(cells));
}

TSetCursor::TSetCursor(int k, int t) : k_(k), t_(t) {
  if (t < 0 || t > k) {
    done_ = true;
    return;
  }
  cols_.resize(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) cols_[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
}

void TSetCursor::next() {
  if (done_) return;
  ++index_;
  int i = t_ - 1;
  while (i >= 0 && cols_[static_cast<std::size_t>(i)] ==
                       static_cast<std::size_t>(k_ - t_ + i)) {
    --i;
  }
  if (i < 0) {
    done_ = true;
    return;
  }
  ++cols_[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < t_; ++j) {
    cols_[static_cast<std::size_t>(j)] = cols_[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace pcaforge
