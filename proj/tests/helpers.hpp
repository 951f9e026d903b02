#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "pcaforge/core.hpp"

namespace testing {

inline pcaforge::Array random_array(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                    int v) {
  std::uniform_int_distribution<int> pick(0, v - 1);
  std::vector<pcaforge::Symbol> cells(rows * cols);
  for (auto& c : cells) c = static_cast<pcaforge::Symbol>(pick(rng));
  return pcaforge::Array(rows, cols, v, std::move(cells));
}

/// All v^t tuples as rows, in rank order.
inline pcaforge::Array full_factorial(int t, int v) {
  const auto n = pcaforge::checked_pow(static_cast<std::uint64_t>(v), t);
  pcaforge::Array a(n, static_cast<std::size_t>(t), v);
  for (std::uint64_t r = 0; r < n; ++r) {
    const auto tuple = pcaforge::tuple_unrank(r, t, v);
    for (int j = 0; j < t; ++j) a.set(r, static_cast<std::size_t>(j), tuple[static_cast<std::size_t>(j)]);
  }
  return a;
}

template <typename Fn>
pcaforge::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const pcaforge::Error& e) {
    return e.code();
  }
  return pcaforge::ErrorCode::Ok;
}

}  // namespace testing

#define CHECK_CODE(expr, expected) \
  CHECK(testing::code_of([&] { (void)(expr); }) == pcaforge::ErrorCode::expected)
