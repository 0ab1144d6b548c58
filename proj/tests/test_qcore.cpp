#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "qdurr/qcore.hpp"
#include "qdurr/summation.hpp"

using namespace qdurr;

namespace {

double naive_qint(std::uint64_t n, double q) {
  double s = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) s += std::pow(q, double(i));
  return s;
}

double product_binomial(std::uint64_t n, std::uint64_t k, double q) {
  double r = 1.0;
  for (std::uint64_t i = 0; i < k; ++i) {
    r *= (1.0 - std::pow(q, double(n - i))) / (1.0 - std::pow(q, double(i + 1)));
  }
  return r;
}

double direct_product(double x, double q, std::size_t terms) {
  double r = 1.0;
  for (std::size_t s = 0; s < terms; ++s) r *= 1.0 - std::pow(q, double(s)) * x;
  return r;
}

}  // namespace

TEST(QParam, AcceptsUnitInterval) {
  EXPECT_EQ(QParam(0.5).value(), 0.5);
  EXPECT_TRUE(QParam(1.0).classical());
  EXPECT_FALSE(QParam(0.999).classical());
  EXPECT_NEAR(QParam(0.25).log(), std::log(0.25), 1e-15);
}

TEST(QParam, RejectsOutsideUnitInterval) {
  EXPECT_THROW(QParam(0.0), DomainError);
  EXPECT_THROW(QParam(-0.5), DomainError);
  EXPECT_THROW(QParam(1.0000001), DomainError);
  EXPECT_THROW(QParam(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST(TruncationPolicy, Validate) {
  EXPECT_NO_THROW(TruncationPolicy{}.validate());
  EXPECT_THROW((TruncationPolicy{0.0, 10}.validate()), DomainError);
  EXPECT_THROW((TruncationPolicy{1e-14, 0}.validate()), DomainError);
}

TEST(Order, FiniteAndInfinite) {
  EXPECT_EQ(Order::finite(7).value(), 7u);
  EXPECT_EQ(Order::finite(7).to_string(), "7");
  EXPECT_TRUE(Order::infinite().is_infinite());
  EXPECT_EQ(Order::infinite().to_string(), "inf");
}

TEST(QInteger, MatchesPartialSum) {
  for (double q : {0.1, 0.5, 0.8, 0.95, 0.999, 1.0}) {
    for (std::uint64_t n : {0u, 1u, 2u, 3u, 10u, 57u}) {
      const double expect = naive_qint(n, q);
      EXPECT_NEAR(q_integer(n, QParam(q)), expect, 1e-14 * std::max(1.0, expect)) << q << " " << n;
    }
  }
}

TEST(QInteger, ClassicalIsExact) {
  EXPECT_EQ(q_integer(12345, QParam(1.0)), 12345.0);
}

TEST(QInteger, LargeNApproachesGeometricLimit) {
  EXPECT_NEAR(q_integer(100000, QParam(0.5)), 2.0, 1e-15);
}

TEST(QFactorial, ProductOfQIntegers) {
  const QParam q(0.7);
  double expect = 1.0;
  for (std::uint64_t n = 1; n <= 15; ++n) {
    expect *= naive_qint(n, 0.7);
    EXPECT_NEAR(q_factorial(n, q), expect, 1e-13 * expect);
  }
  EXPECT_EQ(q_factorial(0, q), 1.0);
  EXPECT_EQ(q_factorial(10, QParam(1.0)), 3628800.0);
}

TEST(QFactorial, OverflowThrows) {
  EXPECT_THROW(q_factorial(400, QParam(1.0)), NumericError);
}

TEST(QBinomial, MatchesProductFormula) {
  for (double q : {0.3, 0.8, 0.99}) {
    for (std::uint64_t n = 0; n <= 20; ++n) {
      const auto row = q_binomial_row(n, QParam(q));
      ASSERT_EQ(row.size(), n + 1);
      for (std::uint64_t k = 0; k <= n; ++k) {
        const double expect = product_binomial(n, k, q);
        EXPECT_NEAR(row[k], expect, 1e-12 * expect);
        EXPECT_NEAR(q_binomial(n, static_cast<std::int64_t>(k), QParam(q)), row[k], 1e-14 * row[k]);
      }
    }
  }
}

TEST(QBinomial, ClassicalPascal) {
  const auto row = q_binomial_row(10, QParam(1.0));
  const double expect[] = {1, 10, 45, 120, 210, 252, 210, 120, 45, 10, 1};
  for (int k = 0; k <= 10; ++k) EXPECT_EQ(row[k], expect[k]);
}

TEST(QBinomial, Symmetric) {
  const QParam q(0.6);
  for (std::int64_t k = 0; k <= 13; ++k) {
    EXPECT_DOUBLE_EQ(q_binomial(13, k, q), q_binomial(13, 13 - k, q));
  }
}

TEST(QBinomial, OutOfRangeIsZero) {
  EXPECT_EQ(q_binomial(5, -1, QParam(0.5)), 0.0);
  EXPECT_EQ(q_binomial(5, 6, QParam(0.5)), 0.0);
}

// prod_{i<n} (1 + q^i z) = sum_k q^{k(k-1)/2} C(n,k)_q z^k
TEST(QBinomial, CauchyBinomialTheorem) {
  const double q = 0.75;
  for (double z : {-0.9, 0.3, 2.0}) {
    const std::uint64_t n = 12;
    const auto row = q_binomial_row(n, QParam(q));
    double rhs = 0.0;
    for (std::uint64_t k = 0; k <= n; ++k) {
      rhs += std::pow(q, double(k * (k - 1)) / 2.0) * row[k] * std::pow(z, double(k));
    }
    EXPECT_NEAR(direct_product(-z, q, n), rhs, 1e-12 * std::max(1.0, std::fabs(rhs)));
  }
}

TEST(QPochhammer, FiniteMatchesDirectProduct) {
  for (double x : {-1.5, 0.0, 0.3, 0.99, 1.0}) {
    for (std::uint64_t m : {0u, 1u, 4u, 30u}) {
      EXPECT_NEAR(q_pochhammer(x, QParam(0.8), Order::finite(m)), direct_product(x, 0.8, m), 1e-14);
    }
  }
}

TEST(QPochhammer, InfiniteMatchesLongProduct) {
  for (double q : {0.3, 0.7, 0.95}) {
    for (double x : {0.0, 0.2, 0.5, 0.9}) {
      const double expect = direct_product(x, q, 5000);
      EXPECT_NEAR(q_pochhammer(x, QParam(q), Order::infinite()), expect, 1e-13);
      if (expect > 0.0) {
        EXPECT_NEAR(log_q_pochhammer_infinite(x, QParam(q)), std::log(expect), 1e-12);
      }
    }
  }
}

TEST(QPochhammer, InfiniteVanishesAtOne) {
  EXPECT_EQ(q_pochhammer(1.0, QParam(0.5), Order::infinite()), 0.0);
}

TEST(QPochhammer, EulerPentagonalCheck) {
  // (q;q)_inf = sum_k (-1)^k q^{k(3k-1)/2} over all integers k.
  const double q = 0.6;
  double series = 0.0;
  for (int k = -30; k <= 30; ++k) series += (k % 2 ? -1.0 : 1.0) * std::pow(q, k * (3.0 * k - 1.0) / 2.0);
  EXPECT_NEAR(q_pochhammer(q, QParam(q), Order::infinite()), series, 1e-14);
}

TEST(QPochhammer, InfiniteNeedsQBelowOne) {
  EXPECT_THROW(q_pochhammer(0.5, QParam(1.0), Order::infinite()), DomainError);
  EXPECT_THROW(log_q_pochhammer_infinite(0.5, QParam(1.0)), DomainError);
  EXPECT_THROW(log_q_pochhammer_infinite(1.0, QParam(0.5)), DomainError);
}

TEST(QPochhammer, MaxTermsExhaustion) {
  EXPECT_THROW(q_pochhammer(0.5, QParam(0.99), Order::infinite(), {1e-14, 5}), NumericError);
}

TEST(JacksonIntegral, Monomials) {
  for (double q : {0.2, 0.5, 0.9, 0.99}) {
    for (int k = 0; k <= 6; ++k) {
      const double expect = (1.0 - q) / (1.0 - std::pow(q, k + 1.0));
      EXPECT_NEAR(jackson_integral([k](double t) { return std::pow(t, k); }, QParam(q)), expect, 1e-13)
          << q << " " << k;
    }
  }
}

TEST(JacksonIntegral, MatchesNaivePartialSum) {
  const double q = 0.7;
  auto f = [](double t) { return std::cos(5 * t) + t; };
  double naive = 0.0;
  for (int j = 0; j < 3000; ++j) naive += (1 - q) * std::pow(q, j) * f(std::pow(q, j));
  EXPECT_NEAR(jackson_integral(f, QParam(q)), naive, 1e-13);
}

TEST(JacksonIntegral, ZeroFunctionAndLateSupport) {
  EXPECT_EQ(jackson_integral([](double) { return 0.0; }, QParam(0.5)), 0.0);
  // Zero on the first nodes, positive below 0.1.
  const double q = 0.5;
  auto f = [](double t) { return t < 0.1 ? 1.0 : 0.0; };
  const double expect = std::pow(q, 4.0);  // (1-q) sum_{j>=4} q^j
  EXPECT_NEAR(jackson_integral(f, QParam(q)), expect, 1e-14);
}

TEST(JacksonIntegral, ClassicalBranch) {
  EXPECT_NEAR(jackson_integral([](double t) { return std::sin(t); }, QParam(1.0)), 1.0 - std::cos(1.0), 1e-14);
  EXPECT_NEAR(classical_integral([](double t) { return std::fabs(t - 0.3); }), 0.29, 1e-12);
  EXPECT_NEAR(classical_integral([](double t) { return std::sqrt(t); }), 2.0 / 3.0, 1e-10);
}

TEST(JacksonIntegral, NonFiniteIntegrandThrows) {
  EXPECT_THROW(jackson_integral([](double t) { return 1.0 / (t - 0.5); }, QParam(0.5)), NumericError);
  EXPECT_THROW(classical_integral([](double) { return std::numeric_limits<double>::infinity(); }), NumericError);
}

TEST(JacksonIntegral, ApproachesRiemannAsQToOne) {
  auto f = [](double t) { return std::exp(t); };
  const double exact = std::exp(1.0) - 1.0;
  double prev = 1e300;
  for (double q : {0.5, 0.9, 0.99, 0.999}) {
    const double err = std::fabs(jackson_integral(f, QParam(q)) - exact);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 2e-3);
}

TEST(CompensatedSum, RecoversCancellation) {
  CompensatedSum s;
  s += 1.0;
  s += 1e100;
  s += 1.0;
  s += -1e100;
  EXPECT_EQ(s.value(), 2.0);
}

TEST(CompensatedSum, BeatsNaiveOnRandomData) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CompensatedSum s;
  long double exact = 0.0L;
  for (int i = 0; i < 100000; ++i) {
    const double v = u(rng) * std::pow(10.0, (i % 9) - 4);
    s += v;
    exact += v;
  }
  EXPECT_NEAR(s.value(), double(exact), 1e-15 * 100000);
}

TEST(StoppingRule, RequiresConsecutiveSmallTerms) {
  StoppingRule rule(1e-10);
  EXPECT_FALSE(rule.observe(1e-12, 1.0));
  EXPECT_FALSE(rule.observe(1.0, 2.0));
  EXPECT_FALSE(rule.observe(1e-12, 2.0));
  EXPECT_TRUE(rule.observe(1e-12, 2.0));
  EXPECT_TRUE(rule.converged());
}

TEST(StoppingRule, ZeroSumNeedsNegligibleFlag) {
  StoppingRule rule(1e-10);
  EXPECT_FALSE(rule.observe(0.0, 0.0));
  EXPECT_FALSE(rule.observe(0.0, 0.0));
  EXPECT_FALSE(rule.observe(0.0, 0.0, true));
  EXPECT_TRUE(rule.observe(0.0, 0.0, true));
}
