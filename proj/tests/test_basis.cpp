#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qdurr/basis.hpp"

using namespace qdurr;

namespace {

double naive_qint(std::uint64_t n, double q) {
  double s = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) s += std::pow(q, double(i));
  return s;
}

// C(n,k)_q x^k prod_{s<n-k}(1 - q^s x) with the binomial from q-factorials.
double direct_basis(std::uint64_t n, std::uint64_t k, double q, double x) {
  double fact_n = 1, fact_k = 1, fact_nk = 1;
  for (std::uint64_t i = 1; i <= n; ++i) fact_n *= naive_qint(i, q);
  for (std::uint64_t i = 1; i <= k; ++i) fact_k *= naive_qint(i, q);
  for (std::uint64_t i = 1; i <= n - k; ++i) fact_nk *= naive_qint(i, q);
  double poch = 1.0;
  for (std::uint64_t s = 0; s < n - k; ++s) poch *= 1.0 - std::pow(q, double(s)) * x;
  return fact_n / (fact_k * fact_nk) * std::pow(x, double(k)) * poch;
}

double direct_limit_basis(std::uint64_t k, double q, double x) {
  double poch = 1.0;
  for (int s = 0; s < 4000; ++s) poch *= 1.0 - std::pow(q, s) * x;
  double qq = 1.0;
  for (std::uint64_t j = 1; j <= k; ++j) qq *= 1.0 - std::pow(q, double(j));
  return std::pow(x, double(k)) * poch / qq;
}

}  // namespace

TEST(BernsteinRow, MatchesDirectFormula) {
  for (double q : {0.4, 0.8, 1.0}) {
    for (std::uint64_t n : {1u, 2u, 7u, 15u}) {
      const BernsteinRow row(n, QParam(q));
      for (double x : {0.0, 0.13, 0.5, 0.87, 1.0}) {
        const auto p = row(x);
        ASSERT_EQ(p.size(), n + 1);
        for (std::uint64_t k = 0; k <= n; ++k) {
          EXPECT_NEAR(p[k], direct_basis(n, k, q, x), 1e-13) << q << " " << n << " " << k << " " << x;
          EXPECT_NEAR(bernstein_basis(n, static_cast<std::int64_t>(k), QParam(q), x), p[k], 1e-14);
        }
      }
    }
  }
}

TEST(BernsteinRow, PartitionOfUnityAndNonnegative) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(0.0, 1.0), uq(0.05, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double q = uq(rng);
    const double x = ux(rng);
    const std::uint64_t n = 1 + trial % 40;
    const auto p = BernsteinRow(n, QParam(q))(x);
    double sum = 0.0;
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

// sum_k [k]/[n] p_nk(x) = x for the q-Bernstein basis.
TEST(BernsteinRow, ReproducesLinearFunctions) {
  const double q = 0.7;
  const std::uint64_t n = 12;
  for (double x : {0.1, 0.45, 0.9}) {
    const auto p = BernsteinRow(n, QParam(q))(x);
    double s = 0.0;
    for (std::uint64_t k = 0; k <= n; ++k) s += naive_qint(k, q) / naive_qint(n, q) * p[k];
    EXPECT_NEAR(s, x, 1e-13);
  }
}

TEST(BernsteinRow, EndpointsAreDeltas) {
  const auto p0 = BernsteinRow(6, QParam(0.5))(0.0);
  const auto p1 = BernsteinRow(6, QParam(0.5))(1.0);
  for (std::size_t k = 0; k <= 6; ++k) {
    EXPECT_EQ(p0[k], k == 0 ? 1.0 : 0.0);
    EXPECT_NEAR(p1[k], k == 6 ? 1.0 : 0.0, 1e-15);
  }
}

TEST(BernsteinRow, Errors) {
  const BernsteinRow row(3, QParam(0.5));
  EXPECT_THROW(row(1.5), DomainError);
  EXPECT_THROW(row(-0.1), DomainError);
  std::vector<double> small(2);
  EXPECT_THROW(row.evaluate(0.5, small), DomainError);
  EXPECT_EQ(bernstein_basis(3, 4, QParam(0.5), 0.5), 0.0);
  EXPECT_EQ(bernstein_basis(3, -1, QParam(0.5), 0.5), 0.0);
}

TEST(LimitBasis, MatchesDirectFormula) {
  for (double q : {0.3, 0.6, 0.9}) {
    LimitBasis basis{QParam(q)};
    for (double x : {0.05, 0.4, 0.75, 0.95}) {
      for (std::uint64_t k : {0u, 1u, 3u, 10u, 25u}) {
        const double expect = direct_limit_basis(k, q, x);
        EXPECT_NEAR(basis.value(k, x), expect, 1e-12 * std::max(1.0, expect)) << q << " " << x << " " << k;
        EXPECT_NEAR(limit_basis(k, QParam(q), x), basis.value(k, x), 1e-15);
      }
    }
  }
}

TEST(LimitBasis, Endpoints) {
  LimitBasis basis{QParam(0.5)};
  EXPECT_EQ(basis.value(0, 0.0), 1.0);
  EXPECT_EQ(basis.value(3, 0.0), 0.0);
  for (std::uint64_t k : {0u, 1u, 20u}) EXPECT_EQ(basis.value(k, 1.0), 0.0);
  EXPECT_TRUE(basis.row(1.0).empty());
  EXPECT_EQ(basis.row(0.0), std::vector<double>{1.0});
}

TEST(LimitBasis, RowAgreesWithValues) {
  LimitBasis basis{QParam(0.8)};
  const auto row = basis.row(0.6);
  for (std::size_t k = 0; k < row.size(); ++k) EXPECT_DOUBLE_EQ(row[k], basis.value(k, 0.6));
}

TEST(LimitBasis, QShiftedFactorialLog) {
  LimitBasis basis{QParam(0.5)};
  double expect = 0.0;
  for (std::uint64_t k = 1; k <= 30; ++k) {
    expect += std::log(1.0 - std::pow(0.5, double(k)));
    EXPECT_NEAR(basis.log_q_shifted_factorial(k), expect, 1e-14);
  }
  EXPECT_EQ(basis.log_q_shifted_factorial(0), 0.0);
}

TEST(LimitBasis, IdentitySums) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(0.0, 0.999), uq(0.05, 0.97);
  for (int trial = 0; trial < 100; ++trial) {
    const double q = uq(rng);
    const double x = ux(rng);
    const IdentitySums s = limit_basis_identity_sums(QParam(q), x);
    EXPECT_NEAR(s.s0, 1.0, 1e-12);
    EXPECT_NEAR(s.s1, x, 1e-12);
    EXPECT_NEAR(s.s2, x * x + (1 - q) * x * (1 - x), 1e-12);
  }
}

// p_nk -> p_inf,k as n grows, with |p_nk - p_inf,k| bounded by
// q^{n-k}/(1-q) (p_nk + p_inf,k).
TEST(LimitBasis, FiniteBasisConverges) {
  const double q = 0.6;
  LimitBasis limit{QParam(q)};
  for (std::uint64_t n : {10u, 40u, 80u}) {
    const auto p = BernsteinRow(n, QParam(q))(0.7);
    for (std::uint64_t k = 0; k <= 5; ++k) {
      const double pinf = limit.value(k, 0.7);
      EXPECT_LE(std::fabs(p[k] - pinf), std::pow(q, double(n - k)) / (1 - q) * (p[k] + pinf) + 1e-14);
    }
  }
}

TEST(LimitBasis, Errors) {
  EXPECT_THROW(LimitBasis{QParam(1.0)}, DomainError);
  LimitBasis basis{QParam(0.5)};
  EXPECT_THROW(basis.value(0, 1.2), DomainError);
  EXPECT_THROW(limit_basis_identity_sums(QParam(0.5), 1.0), DomainError);
  LimitBasis tiny{QParam(0.5), {1e-14, 3}};
  EXPECT_THROW(tiny.row(0.5), NumericError);
}
