#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "oracle.hpp"
#include "pcaforge/bounds.hpp"

using namespace pcaforge;
using namespace pcaforge::bounds;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

PcaParams p(int t, int k, int v, std::uint64_t m, double eps = 0.0) {
  return PcaParams{t, k, v, m, eps, 0};
}

}  // namespace

TEST_CASE("log_binomial") {
  CHECK(log_binomial(4, 3) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(log_binomial(17, 0) == 0.0);
  CHECK(log_binomial(4096, 4095) == doctest::Approx(std::log(4096.0)).epsilon(1e-12));
  for (std::uint64_t n : {5ULL, 40ULL, 4096ULL, 3'000'000ULL}) {
    for (std::uint64_t r : {1ULL, 2ULL, 3ULL, 5ULL}) {
      CHECK(log_binomial(n, r) == doctest::Approx(log_binomial(n, n - r)).epsilon(1e-10));
      const double expect = static_cast<double>(oracle::ln(oracle::binomial(n, r)));
      CHECK(rel(log_binomial(n, r), expect) < 1e-10);
    }
  }
  const double big = static_cast<double>(oracle::ln(oracle::binomial(4096, 2000)));
  CHECK(rel(log_binomial(4096, 2000), big) < 1e-10);
}

TEST_CASE("minimal row counts at integer boundaries") {
  CHECK(min_rows_above(1.0, true) == 2);
  CHECK(min_rows_above(1.0, false) == 1);
  CHECK(min_rows_above(1.0 + 1e-12, true) == 2);
  CHECK(min_rows_above(11.047, true) == 12);
  CHECK(min_rows_above(15.5, false) == 16);
  CHECK(min_rows_above(-3.0, true) == 0);
}

TEST_CASE("union bound") {
  const auto r = pca_union(p(2, 4, 2, 4));
  CHECK(r.n_rows == 12);
  CHECK(rel(r.real_bound, static_cast<double>(oracle::union_bound(2, 4, 2, 4))) < 1e-9);
  CHECK(r.source == "union");
  CHECK(oracle::union_rows_exact(2, 4, 2, 4) == 12);

  const auto edge = pca_union(p(2, 2, 2, 2));
  CHECK(edge.real_bound == doctest::Approx(1.0));
  CHECK(edge.n_rows == 2);
  CHECK(oracle::union_rows_exact(2, 2, 2, 2) == 2);

  const auto one = pca_union(p(3, 7, 3, 1));
  CHECK(one.n_rows == 1);
  CHECK(one.real_bound == 0.0);

  for (int t = 2; t <= 3; ++t) {
    for (int v = 2; v <= 3; ++v) {
      const auto vt = oracle::ipow(v, t);
      for (int k = t; k <= 8; ++k) {
        for (std::uint64_t m = 2; m <= vt; ++m) {
          REQUIRE(pca_union(p(t, k, v, m)).n_rows == oracle::union_rows_exact(t, k, v, m));
        }
      }
    }
  }
}

TEST_CASE("local lemma bound") {
  const auto r = pca_lll(p(2, 4, 2, 4));
  CHECK(r.n_rows == 16);
  CHECK(rel(r.real_bound, static_cast<double>(oracle::lll_bound(2, 4, 2, 4))) < 1e-9);
  CHECK_CODE(pca_lll(p(2, 3, 2, 4)), KTooSmallForLLL);

  const auto fig = pca_lll(p(6, 20, 4, 4096));
  CHECK(rel(fig.real_bound, static_cast<double>(oracle::lll_bound(6, 20, 4, 4096))) < 1e-9);
  CHECK(fig.n_rows == oracle::lll_rows(6, 20, 4, 4096));
  for (std::uint64_t m = 4073; m <= 4096; m += 7) {
    CHECK(pca_lll(p(6, 20, 4, m)).n_rows == oracle::lll_rows(6, 20, 4, m));
  }
}

TEST_CASE("bounds are monotone in m and k") {
  for (int k = 4; k <= 12; ++k) {
    std::uint64_t prev_u = 0, prev_l = 0;
    for (std::uint64_t m = 2; m <= 9; ++m) {
      const auto u = pca_union(p(2, k, 3, m)).n_rows;
      const auto l = pca_lll(p(2, k, 3, m)).n_rows;
      CHECK(u >= prev_u);
      CHECK(l >= prev_l);
      prev_u = u;
      prev_l = l;
    }
  }
  for (std::uint64_t m = 2; m <= 8; ++m) {
    std::uint64_t prev_u = 0, prev_l = 0;
    for (int k = 6; k <= 40; ++k) {
      const auto u = pca_union(p(3, k, 2, m)).n_rows;
      const auto l = pca_lll(p(3, k, 2, m)).n_rows;
      CHECK(u >= prev_u);
      CHECK(l >= prev_l);
      prev_u = u;
      prev_l = l;
    }
  }
}

TEST_CASE("asymptotic form") {
  const double expect = 4096.0 * 5.0 * std::log(1024.0) / 20.0 *
                        (1.0 - std::log(20.0) / std::log(1024.0));
  CHECK(pca_asymptotic(6, 4, 1024.0, 20) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(pca_asymptotic(3, 2, 50.0, 1) == doctest::Approx(8.0 * 2.0 * std::log(50.0)));
  CHECK(pca_asymptotic(2, 2, std::exp(1.0), 1) == doctest::Approx(4.0));
  CHECK_CODE(pca_asymptotic(2, 2, 1.0, 1), DomainError);
  CHECK(pca_asymptotic(p(6, 1024, 4, 4096 - 20 + 1)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("almost-partial bound") {
  const auto r = apca(p(2, 4, 2, 4, 0.01));
  CHECK(r.n_rows == 21);
  CHECK(rel(r.real_bound, static_cast<double>(oracle::apca_bound(2, 2, 4, oracle::Real(1) / 100))) <
        1e-9);
  CHECK(oracle::apca_rows_exact(2, 2, 4, 1, 100) == 21);
  CHECK_CODE(apca(p(2, 4, 2, 4, 0.0)), EpsilonZero);

  const auto alg = apca_algorithm(p(2, 10, 2, 4, 0.01));
  CHECK(alg.n_rows == 24);
  CHECK(oracle::apca_rows_exact(2, 2, 4, 1, 100, 2) == 24);

  // Below 1/C(k,t) the almost bound is at least the union bound.
  const auto small = apca(p(2, 4, 2, 4, 0.1 / 6));
  CHECK(small.n_rows >= pca_union(p(2, 4, 2, 4)).n_rows);

  for (int v = 2; v <= 4; ++v) {
    const double vt = v * v;
    for (double eps : {0.5, 0.1, 0.01, 0.001}) {
      CHECK(apca(p(2, 5, v, static_cast<std::uint64_t>(vt), eps)).real_bound <=
            vt * std::log(vt / eps) + 1e-9);
    }
  }
  std::uint64_t prev = UINT64_MAX;
  for (double eps = 0.001; eps <= 1.0; eps *= 1.7) {
    const auto n = apca(p(3, 6, 2, 7, eps)).n_rows;
    CHECK(n <= prev);
    prev = n;
  }
  // Exact integer oracle over a small grid of rational epsilons.
  for (std::uint64_t m = 2; m <= 9; ++m) {
    for (std::uint64_t den : {2ULL, 10ULL, 100ULL, 1000ULL}) {
      const auto got = apca(p(2, 5, 3, m, 1.0 / static_cast<double>(den))).n_rows;
      CHECK(got == oracle::apca_rows_exact(2, 3, m, 1, den));
    }
  }
}

TEST_CASE("cyclic almost bound") {
  const auto r = apca_cyclic(p(2, 5, 2, 4, 0.01));
  CHECK(r.n_rows == 16);
  CHECK(r.real_bound == doctest::Approx(4.0 * std::log(200.0)).epsilon(1e-12));
  CHECK(cyclic_base_rows(2, 2, 0.01) == 8);
  CHECK(apca_cyclic(p(2, 5, 2, 4, 1.0)).n_rows == 2);
  CHECK_CODE(apca_cyclic(p(2, 5, 2, 4, 0.0)), EpsilonZero);
  CHECK_CODE(apca_cyclic(p(2, 5, 2, 3, 0.1)), MNotFull);
  const auto big = apca_cyclic(p(6, 20, 4, 4096, 0.01));
  CHECK(static_cast<double>(big.n_rows) <= big.real_bound);
}

TEST_CASE("Frobenius almost bound") {
  CHECK_CODE(apca_frobenius(p(2, 5, 6, 36, 0.1)), NotPrimePower);
  const auto r = apca_frobenius(p(2, 5, 3, 9, 0.01));
  CHECK(r.n_rows == 33);
  CHECK(frobenius_base_rows(2, 3, 0.01) == 5);
  for (int t = 2; t <= 4; ++t) {
    for (int v = 2; v <= 5; ++v) {
      for (double eps : {0.1, 0.01}) {
        const auto b = apca_frobenius(p(t, t + 1, v, oracle::ipow(v, t), eps));
        CHECK(b.real_bound >= static_cast<double>(b.n_rows));
      }
    }
  }
}

TEST_CASE("cyclic partial bound") {
  const auto lll = pca_lll(p(6, 20, 4, 4092));
  const auto cyc = pca_cyclic(p(6, 20, 4, 4092));
  CHECK(cyc.real_bound > lll.real_bound);
  CHECK(rel(cyc.real_bound, static_cast<double>(oracle::pca_cyclic_bound(6, 20, 4, 4092, false))) <
        1e-9);
  const auto full = pca_cyclic(p(6, 20, 4, 4096));
  CHECK(full.real_bound < pca_lll(p(6, 20, 4, 4096)).real_bound);
  CHECK(full.n_rows % 4 == 0);
  CHECK(full.n_rows == 4 * static_cast<std::uint64_t>(std::ceil(full.real_bound / 4.0)));

  const auto with_t = pca_cyclic(p(6, 20, 4, 4096), true);
  CHECK(with_t.real_bound > full.real_bound);
  CHECK(rel(with_t.real_bound, static_cast<double>(oracle::pca_cyclic_bound(6, 20, 4, 4096, true))) <
        1e-9);
  CHECK(with_t.source == "pca-cyclic-with-t");

  // m = 1 puts s at v^{t-1}.
  CHECK_CODE(pca_cyclic(p(2, 4, 2, 1)), SOutOfRange);
}

TEST_CASE("concatenation bound") {
  const double eps = 4.0 / std::pow(64.0, 0.5);
  const auto plan = concat_plan(p(3, 64, 2, 5, eps));
  CHECK(plan.r >= 1);
  CHECK(plan.m_component == 8 - plan.r + 1);
  const auto c = concat(p(3, 64, 2, 5, eps));
  CHECK(c.n_rows == plan.partial.n_rows + plan.almost.n_rows);
  CHECK(std::isfinite(c.real_bound));

  CHECK_CODE(concat(p(2, 12, 2, 3, 0.1)), RNonPositive);
  CHECK_CODE(concat(p(2, 8, 2, 4, 0.5)), MConditionViolated);
  CHECK_CODE(concat(p(2, 8, 2, 3, 0.0)), EpsilonZero);
}

TEST_CASE("reference bounds") {
  CHECK(can_reference(2, 4, 2).upper == doctest::Approx(8.0));
  CHECK(can_reference(2, 4, 2).lower == doctest::Approx(4.0));
  CHECK(can_reference(3, 8, 2).upper == doctest::Approx(48.0));
  CHECK(can_reference(3, 8, 2).lower == doctest::Approx(12.0));
  double prev = 0.0;
  for (int k = 3; k < 100; ++k) {
    CHECK(can_reference(3, k, 3).upper > prev);
    prev = can_reference(3, k, 3).upper;
  }
}

TEST_CASE("formula names") {
  CHECK(parse_formula("eq5") == Formula::Union);
  CHECK(parse_formula("eq6") == Formula::Lll);
  CHECK(parse_formula("eq8") == Formula::PcaCyclic);
  CHECK(parse_formula("pca-cyclic-with-t") == Formula::PcaCyclicWithT);
  CHECK_FALSE(parse_formula("eq9").has_value());
  for (int f = 0; f <= static_cast<int>(Formula::Concat); ++f) {
    CHECK(parse_formula(formula_label(static_cast<Formula>(f))) == static_cast<Formula>(f));
  }
}

TEST_CASE("sweeps") {
  const auto a = sweep({Formula::Lll, Formula::PcaCyclic}, Axis::M, 4073, 4096, 1, p(6, 20, 4, 4096));
  REQUIRE(a.points.size() == 24);
  for (const auto& pt : a.points) {
    REQUIRE(pt.cells[0].result);
    REQUIRE(pt.cells[1].result);
    const double lll = pt.cells[0].result->real_bound;
    const double cyc = pt.cells[1].result->real_bound;
    if (pt.value == 4096) {
      CHECK(cyc < lll);
    } else {
      CHECK(lll < cyc);
    }
  }

  const auto single = sweep({Formula::Union}, Axis::K, 9, 9, 1, p(2, 4, 2, 4));
  CHECK(single.points.size() == 1);
  CHECK_CODE(sweep({Formula::Union}, Axis::K, 9, 8, 1, p(2, 4, 2, 4)), EmptyRange);

  // The local lemma needs k >= 2t, so k = 3 is a gap.
  const auto gaps = sweep({Formula::Lll}, Axis::K, 3, 4, 1, p(2, 4, 2, 4));
  CHECK_FALSE(gaps.points[0].cells[0].result.has_value());
  CHECK_FALSE(gaps.points[0].cells[0].gap_reason.empty());
  CHECK(gaps.points[1].cells[0].result.has_value());
}
