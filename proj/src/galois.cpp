#include "pcaforge/galois.hpp"

#include <algorithm>
#include <sstream>

namespace pcaforge::galois {
namespace {

struct FieldShape {
  int p;
  int n;
};

std::optional<FieldShape> factor_prime_power(int v) {
  if (v < 2) return std::nullopt;
  int p = 0;
  for (int d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) return FieldShape{v, 1};
  int n = 0;
  while (v % p == 0) {
    v /= p;
    ++n;
  }
  if (v != 1) return std::nullopt;
  return FieldShape{p, n};
}

// Monic irreducible polynomials, coefficients low degree first.
std::vector<int> irreducible_for(int order) {
  switch (order) {
    case 4: return {1, 1, 1};              // x^2 + x + 1
    case 8: return {1, 1, 0, 1};           // x^3 + x + 1
    case 16: return {1, 1, 0, 0, 1};       // x^4 + x + 1
    case 32: return {1, 0, 1, 0, 0, 1};    // x^5 + x^2 + 1
    case 64: return {1, 1, 0, 0, 0, 0, 1}; // x^6 + x + 1
    case 9: return {1, 0, 1};              // x^2 + 1
    case 27: return {1, 2, 0, 1};          // x^3 + 2x + 1
    case 25: return {2, 0, 1};             // x^2 + 2
    case 49: return {1, 0, 1};             // x^2 + 1
    default: return {};
  }
}

std::vector<int> digits(int x, int p, int n) {
  std::vector<int> d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    d[static_cast<std::size_t>(i)] = x % p;
    x /= p;
  }
  return d;
}

int undigits(const std::vector<int>& d, int p) {
  int x = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) x = x * p + *it;
  return x;
}

}  // namespace

bool is_prime_power(int v) { return factor_prime_power(v).has_value(); }

Field::Field(int order) : order_(order) {
  const auto shape = factor_prime_power(order);
  if (!shape) {
    std::ostringstream os;
    os << order << " is not a prime power";
    fail(ErrorCode::NotPrimePower, os.str());
  }
  if (order > kMaxOrder) fail(ErrorCode::OrderTooLarge, "field order exceeds 64");
  p_ = shape->p;
  n_ = shape->n;
  modulus_ = n_ == 1 ? std::vector<int>{0, 1} : irreducible_for(order);

  const auto q = static_cast<std::size_t>(order);
  add_.resize(q * q);
  mul_.resize(q * q);
  for (int a = 0; a < order; ++a) {
    const auto da = digits(a, p_, n_);
    for (int b = 0; b < order; ++b) {
      const auto db = digits(b, p_, n_);
      const std::size_t at = static_cast<std::size_t>(a) * q + static_cast<std::size_t>(b);
      if (n_ == 1) {
        add_[at] = static_cast<Symbol>((a + b) % p_);
        mul_[at] = static_cast<Symbol>((a * b) % p_);
        continue;
      }
      std::vector<int> sum(static_cast<std::size_t>(n_));
      for (int i = 0; i < n_; ++i) {
        sum[static_cast<std::size_t>(i)] =
            (da[static_cast<std::size_t>(i)] + db[static_cast<std::size_t>(i)]) % p_;
      }
      add_[at] = static_cast<Symbol>(undigits(sum, p_));

      std::vector<int> prod(static_cast<std::size_t>(2 * n_ - 1), 0);
      for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
          auto& c = prod[static_cast<std::size_t>(i + j)];
          c = (c + da[static_cast<std::size_t>(i)] * db[static_cast<std::size_t>(j)]) % p_;
        }
      }
      // Reduce by the monic modulus from the top degree down.
      for (int deg = 2 * n_ - 2; deg >= n_; --deg) {
        const int lead = prod[static_cast<std::size_t>(deg)];
        if (lead == 0) continue;
        for (int i = 0; i <= n_; ++i) {
          auto& c = prod[static_cast<std::size_t>(deg - n_ + i)];
          c = ((c - lead * modulus_[static_cast<std::size_t>(i)]) % p_ + p_) % p_;
        }
      }
      prod.resize(static_cast<std::size_t>(n_));
      mul_[at] = static_cast<Symbol>(undigits(prod, p_));
    }
  }
}

Symbol Field::neg(Symbol a) const {
  for (int b = 0; b < order_; ++b) {
    if (add(a, static_cast<Symbol>(b)) == 0) return static_cast<Symbol>(b);
  }
  fail(ErrorCode::DomainError, "no additive inverse");
}

Symbol Field::inv(Symbol a) const {
  if (a == 0) fail(ErrorCode::DomainError, "zero has no multiplicative inverse");
  for (int b = 1; b < order_; ++b) {
    if (mul(a, static_cast<Symbol>(b)) == 1) return static_cast<Symbol>(b);
  }
  fail(ErrorCode::DomainError, "no multiplicative inverse");
}

GroupAction GroupAction::cyclic(int v) {
  if (v < 2) fail(ErrorCode::AlphabetTooSmall, "v must be at least 2");
  GroupAction g(ActionKind::Cyclic, v);
  for (int c = 0; c < v; ++c) {
    std::vector<Symbol> perm(static_cast<std::size_t>(v));
    for (int x = 0; x < v; ++x) perm[static_cast<std::size_t>(x)] = static_cast<Symbol>((x + c) % v);
    g.perms_.push_back(std::move(perm));
  }
  return g;
}

GroupAction GroupAction::frobenius(int v) {
  const Field field(v);
  GroupAction g(ActionKind::Frobenius, v);
  for (int a = 1; a < v; ++a) {
    for (int b = 0; b < v; ++b) {
      std::vector<Symbol> perm(static_cast<std::size_t>(v));
      for (int x = 0; x < v; ++x) {
        perm[static_cast<std::size_t>(x)] = field.add(
            field.mul(static_cast<Symbol>(a), static_cast<Symbol>(x)), static_cast<Symbol>(b));
      }
      g.perms_.push_back(std::move(perm));
    }
  }
  return g;
}

std::size_t GroupAction::affine_index(Symbol a, Symbol b) const {
  if (kind_ != ActionKind::Frobenius || a == 0 || a >= v_ || b >= v_) {
    fail(ErrorCode::InvalidArgument, "not an affine element of this group");
  }
  return static_cast<std::size_t>(a - 1) * static_cast<std::size_t>(v_) + b;
}

void GroupAction::act_into(std::size_t g, std::span<const Symbol> tuple,
                           std::span<Symbol> out) const {
  const auto& perm = perms_[g];
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= v_) fail(ErrorCode::SymbolOutOfRange, "tuple coordinate >= v");
    out[i] = perm[tuple[i]];
  }
}

std::vector<Symbol> GroupAction::act(std::size_t g, std::span<const Symbol> tuple) const {
  std::vector<Symbol> out(tuple.size());
  act_into(g, tuple, out);
  return out;
}

OrbitStructure orbits(int t, int v, const GroupAction& action) {
  if (t < 1) fail(ErrorCode::InvalidArgument, "orbits need t >= 1");
  if (action.v() != v) fail(ErrorCode::InvalidArgument, "action alphabet differs from v");
  const std::uint64_t total = checked_pow(static_cast<std::uint64_t>(v), t);
  if (total > kMaxOrbitTuples) {
    fail(ErrorCode::CapacityExceeded, "v^t too large to enumerate orbits");
  }

  constexpr std::uint32_t kUnassigned = ~std::uint32_t{0};
  OrbitStructure out;
  out.t = t;
  out.v = v;
  out.orbit_index.assign(static_cast<std::size_t>(total), kUnassigned);

  std::vector<Symbol> image(static_cast<std::size_t>(t));
  for (Rank r = 0; r < total; ++r) {
    if (out.orbit_index[r] != kUnassigned) continue;
    const auto id = static_cast<std::uint32_t>(out.representatives.size());
    const auto x = tuple_unrank(r, t, v);
    std::uint64_t length = 0;
    for (std::size_t g = 0; g < action.size(); ++g) {
      action.act_into(g, x, image);
      const Rank y = tuple_rank(image, v);
      if (out.orbit_index[y] == kUnassigned) {
        out.orbit_index[y] = id;
        ++length;
      }
    }
    out.representatives.push_back(r);
    out.lengths.push_back(length);
  }
  if (action.kind() == ActionKind::Frobenius) {
    out.short_orbit_id = out.orbit_index[0];
  }
  return out;
}

Array develop(const Array& base, const GroupAction& action) {
  if (base.v() != action.v()) fail(ErrorCode::InvalidArgument, "action alphabet differs from v");
  const std::uint64_t rows = static_cast<std::uint64_t>(base.rows()) * action.size();
  if (rows * base.cols() > (std::uint64_t{1} << 32)) {
    fail(ErrorCode::CapacityExceeded, "developed array too large");
  }
  std::vector<Symbol> cells(static_cast<std::size_t>(rows * base.cols()));
  std::size_t out_row = 0;
  for (std::size_t r = 0; r < base.rows(); ++r) {
    const auto row = base.row(r);
    for (std::size_t g = 0; g < action.size(); ++g, ++out_row) {
      action.act_into(g, row, std::span<Symbol>(cells.data() + out_row * base.cols(), base.cols()));
    }
  }
  return Array(static_cast<std::size_t>(rows), base.cols(), base.v(), std::move(cells));
}

Array constant_rows(std::size_t k, int v) {
  Array out(static_cast<std::size_t>(v), k, v);
  for (int r = 0; r < v; ++r) {
    for (std::size_t c = 0; c < k; ++c) out.set(static_cast<std::size_t>(r), c, static_cast<Symbol>(r));
  }
  return out;
}

}  // namespace pcaforge::galois
