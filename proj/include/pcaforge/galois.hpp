#pragma once

// Finite fields of order <= 64, the cyclic and Frobenius actions on symbols,
// orbit partitions of [v]^t and development of base arrays.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pcaforge/core.hpp"

namespace pcaforge::galois {

bool is_prime_power(int v);

/// Elements are 0..v-1, read as base-p digit vectors of polynomials over
/// GF(p) (least significant digit = constant term). Multiplication reduces by
/// a fixed irreducible polynomial per order.
class Field {
 public:
  static constexpr int kMaxOrder = 64;

  explicit Field(int order);

  int order() const noexcept { return order_; }
  int characteristic() const noexcept { return p_; }
  int degree() const noexcept { return n_; }

  Symbol add(Symbol a, Symbol b) const { return add_[idx(a, b)]; }
  Symbol mul(Symbol a, Symbol b) const { return mul_[idx(a, b)]; }
  Symbol neg(Symbol a) const;
  Symbol inv(Symbol a) const;

  /// Coefficients (low degree first, leading 1 included) of the modulus.
  const std::vector<int>& modulus() const noexcept { return modulus_; }

 private:
  std::size_t idx(Symbol a, Symbol b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(order_) + b;
  }

  int order_;
  int p_;
  int n_;
  std::vector<int> modulus_;
  std::vector<Symbol> add_;
  std::vector<Symbol> mul_;
};

enum class ActionKind { Cyclic, Frobenius };

/// A permutation group on {0..v-1}, stored as its element list. The identity
/// is always element 0. Cyclic: x -> x + c mod v, c = 0..v-1. Frobenius:
/// x -> a*x + b over GF(v), a = 1..v-1 outer, b = 0..v-1 inner.
class GroupAction {
 public:
  static GroupAction cyclic(int v);
  static GroupAction frobenius(int v);

  ActionKind kind() const noexcept { return kind_; }
  int v() const noexcept { return v_; }
  std::size_t size() const noexcept { return perms_.size(); }
  std::span<const Symbol> element(std::size_t g) const { return perms_[g]; }

  /// Coordinatewise image of `tuple` under element g.
  std::vector<Symbol> act(std::size_t g, std::span<const Symbol> tuple) const;
  void act_into(std::size_t g, std::span<const Symbol> tuple, std::span<Symbol> out) const;

  /// Index of the cyclic shift c, or of the affine map (a, b).
  static std::size_t cyclic_index(int c) { return static_cast<std::size_t>(c); }
  std::size_t affine_index(Symbol a, Symbol b) const;

 private:
  GroupAction(ActionKind kind, int v) : kind_(kind), v_(v) {}

  ActionKind kind_;
  int v_;
  std::vector<std::vector<Symbol>> perms_;
};

struct OrbitStructure {
  int t = 0;
  int v = 0;
  std::vector<std::uint32_t> orbit_index;  ///< tuple rank -> orbit id
  std::vector<Rank> representatives;       ///< minimum rank per orbit
  std::vector<std::uint64_t> lengths;
  std::optional<std::uint32_t> short_orbit_id;  ///< Frobenius constant tuples

  std::size_t orbit_count() const noexcept { return representatives.size(); }
};

/// Largest v^t for which orbits() will enumerate [v]^t.
inline constexpr std::uint64_t kMaxOrbitTuples = std::uint64_t{1} << 24;

OrbitStructure orbits(int t, int v, const GroupAction& action);

/// Replaces each row by its images under every group element: input row
/// order first, then element order.
Array develop(const Array& base, const GroupAction& action);

/// v x k array whose row i is all-i.
Array constant_rows(std::size_t k, int v);

}  // namespace pcaforge::galois
