#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "gl2kit/errors.hpp"
#include "gl2kit/modarith.hpp"

using namespace gl2kit;

namespace {

// Order of x in (Z/p)^x by repeated multiplication.
std::int64_t naive_order(std::int64_t x, std::int64_t p) {
  std::int64_t k = 1;
  for (std::int64_t y = x % p; y != 1; y = y * x % p) ++k;
  return k;
}

std::uint64_t brute_force_gl2_count(std::int64_t n) {
  std::uint64_t count = 0;
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      for (std::int64_t c = 0; c < n; ++c)
        for (std::int64_t d = 0; d < n; ++d) {
          const std::int64_t det = ((a * d - b * c) % n + n) % n;
          if (std::gcd(det, n) == 1) ++count;
        }
  return count;
}

}  // namespace

TEST(PrimitiveRoot, SmallPrimes) {
  EXPECT_EQ(primitive_root(5), 2);
  EXPECT_EQ(primitive_root(7), 3);
  EXPECT_EQ(primitive_root(11), 2);
}

TEST(PrimitiveRoot, IsSmallestGeneratorBelow200) {
  for (std::int64_t p = 3; p < 200; p += 2) {
    if (!is_prime(static_cast<std::uint64_t>(p))) continue;
    const Residue g = primitive_root(p);
    EXPECT_EQ(naive_order(g, p), p - 1) << p;
    for (std::int64_t smaller = 2; smaller < g; ++smaller) EXPECT_LT(naive_order(smaller, p), p - 1) << p;
  }
}

TEST(PrimitiveRoot, RejectsNonPrimes) {
  EXPECT_THROW(primitive_root(9), PreconditionError);
  EXPECT_THROW(primitive_root(2), PreconditionError);
}

TEST(Integers, InverseAndPower) {
  EXPECT_EQ(inv_mod(3, 7), 5);
  EXPECT_FALSE(inv_mod(4, 8).has_value());
  EXPECT_EQ(pow_mod(2, 10, 1000), 24);
  EXPECT_EQ(reduce(-3, 7), 4);
}

TEST(Integers, FactorizeAndPrimes) {
  const auto f = factorize(360);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], (std::pair<std::uint64_t, unsigned>{2, 3}));
  EXPECT_EQ(f[1], (std::pair<std::uint64_t, unsigned>{3, 2}));
  EXPECT_EQ(f[2], (std::pair<std::uint64_t, unsigned>{5, 1}));
  EXPECT_EQ(min_prime_divisor(1), std::nullopt);
  EXPECT_EQ(min_prime_divisor(121), 11u);
  EXPECT_TRUE(is_prime(2147483647ULL));
  EXPECT_FALSE(is_prime(1));
}

TEST(Integers, SqrtModAgreesWithLegendre) {
  for (const std::int64_t p : {5, 7, 11, 13, 17, 97}) {
    for (std::int64_t x = 1; x < p; ++x) {
      const auto r = sqrt_mod(x, p);
      EXPECT_EQ(r.has_value(), legendre(x, p) == 1) << x << " mod " << p;
      if (r) EXPECT_EQ(mul_mod(*r, *r, p), x);
    }
  }
}

TEST(Mat2, ReducesEntries) {
  const Mat2 x(5, -1, 7, 10, 3);
  EXPECT_EQ(x.entries(), (std::array<Residue, 4>{4, 2, 0, 3}));
}

TEST(MatMul, Examples) {
  EXPECT_EQ(Mat2::identity(7) * Mat2::identity(7), Mat2::identity(7));
  EXPECT_EQ(Mat2::upper_unipotent(5) * Mat2::upper_unipotent(5), Mat2(5, 1, 2, 0, 1));
  const Mat2 u_inv(5, 1, -1, 0, 1);
  EXPECT_EQ(u_inv * Mat2::lower_unipotent(5) * u_inv, Mat2(5, 0, -1, 1, 0));
}

TEST(MatMul, ModulusMismatchThrows) {
  EXPECT_THROW(Mat2::identity(5) * Mat2::identity(7), PreconditionError);
}

TEST(MatInv, Examples) {
  EXPECT_EQ(mat_inv(Mat2::identity(5)), Mat2::identity(5));
  EXPECT_EQ(mat_inv(Mat2::upper_unipotent(7)), Mat2(7, 1, 6, 0, 1));
  EXPECT_EQ(mat_inv(Mat2(5, 2, 0, 0, 3)), Mat2(5, 3, 0, 0, 2));
  EXPECT_THROW(mat_inv(Mat2(5, 1, 2, 2, 4)), PreconditionError);
  EXPECT_THROW(mat_inv(Mat2(6, 2, 0, 0, 1)), PreconditionError);
}

TEST(MatInv, RoundTripsOverGL2OfSmallRings) {
  for (const std::int64_t n : {5, 6, 12}) {
    for (std::int64_t a = 0; a < n; ++a)
      for (std::int64_t b = 0; b < n; ++b)
        for (std::int64_t c = 0; c < n; ++c)
          for (std::int64_t d = 0; d < n; ++d) {
            const Mat2 x(n, a, b, c, d);
            if (!x.is_invertible()) continue;
            ASSERT_TRUE((x * mat_inv(x)).is_identity()) << x;
            ASSERT_TRUE((mat_inv(x) * x).is_identity()) << x;
          }
  }
}

TEST(MatPow, NegativeExponents) {
  const Mat2 x(7, 2, 1, 3, 4);
  EXPECT_EQ(mat_pow(x, -1), mat_inv(x));
  EXPECT_TRUE((mat_pow(x, 5) * mat_pow(x, -5)).is_identity());
  EXPECT_EQ(conjugate_by(x, Mat2::identity(7)), x);
}

TEST(ElementOrder, Examples) {
  EXPECT_EQ(element_order(Mat2::identity(7)), 1u);
  EXPECT_EQ(element_order(Mat2::upper_unipotent(5)), 5u);
  EXPECT_EQ(element_order(Mat2::scalar(7, -1)), 2u);
  EXPECT_THROW(element_order(Mat2(5, 0, 0, 0, 1)), PreconditionError);
}

TEST(ElementOrder, MatchesRepeatedMultiplication) {
  for (const std::int64_t n : {5, 9}) {
    for (std::int64_t a = 0; a < n; ++a)
      for (std::int64_t b = 0; b < n; ++b)
        for (std::int64_t c = 0; c < n; ++c)
          for (std::int64_t d = 0; d < n; ++d) {
            const Mat2 x(n, a, b, c, d);
            if (!x.is_invertible()) continue;
            std::uint64_t k = 1;
            for (Mat2 y = x; !y.is_identity(); y = y * x) ++k;
            ASSERT_EQ(element_order(x), k) << x;
            ASSERT_EQ(gl2_order(static_cast<std::uint64_t>(n)) % k, 0u);
          }
  }
}

TEST(QuadExt, ConjugationNormAndInverse) {
  const QuadExtElem x = QuadExtElem::standard(7, 2, 5);
  EXPECT_EQ(x.alpha(), 3);
  EXPECT_EQ(x.conj(), QuadExtElem::standard(7, 2, 2));
  EXPECT_EQ(x * x.conj(), x.rational(x.norm()));
  EXPECT_EQ(x * x.inverse(), x.rational(1));
  const QuadExtElem root = QuadExtElem::standard(7, 0, 1);
  EXPECT_EQ(root * root, root.rational(3));
}

TEST(QuadExt, RejectsNonGenerator) {
  EXPECT_THROW(QuadExtElem(7, 2, 1, 1), PreconditionError);  // 2 has order 3 mod 7
  EXPECT_NO_THROW(QuadExtElem(7, 5, 1, 1));
}

TEST(QuadExt, MultiplicativeGroupIsCyclicOfOrderLSquaredMinusOne) {
  const std::int64_t p = 5;
  std::uint64_t generators = 0;
  for (Residue re = 0; re < p; ++re)
    for (Residue im = 0; im < p; ++im) {
      if (re == 0 && im == 0) continue;
      const auto x = QuadExtElem::standard(p, re, im);
      EXPECT_EQ(x.pow(24), x.rational(1));
      if (multiplicative_order(x) == 24) ++generators;
    }
  EXPECT_EQ(generators, 8u);  // phi(24)
}

TEST(Eigenvalues, Examples) {
  const EigenResult irr = eigenvalues(Mat2(5, 0, 2, 1, 0));
  EXPECT_EQ(irr.kind, EigenKind::IrrationalConjugatePair);
  EXPECT_EQ(irr.values[1], irr.values[0].conj());
  EXPECT_EQ(irr.values[0] * irr.values[0], irr.values[0].rational(2));

  const EigenResult split = eigenvalues(Mat2(5, 0, 1, 4, 0));
  EXPECT_EQ(split.kind, EigenKind::RationalDistinct);
  EXPECT_EQ(split.values[0].re(), 2);
  EXPECT_EQ(split.values[1].re(), 3);

  const EigenResult rep = eigenvalues(Mat2::upper_unipotent(7));
  EXPECT_EQ(rep.kind, EigenKind::RationalRepeated);
  EXPECT_EQ(rep.values[0].re(), 1);
  EXPECT_EQ(rep.values[1].re(), 1);

  EXPECT_THROW(eigenvalues(Mat2::identity(9)), PreconditionError);
}

TEST(Eigenvalues, KindFollowsDiscriminantLegendreSymbol) {
  std::mt19937_64 rng(7);
  for (const std::int64_t p : {5, 7, 11, 13}) {
    std::uniform_int_distribution<Residue> entry(0, p - 1);
    for (int i = 0; i < 1000; ++i) {
      const Mat2 x(p, entry(rng), entry(rng), entry(rng), entry(rng));
      const Residue disc = reduce(x.trace() * x.trace() - 4 * x.det(), p);
      const EigenResult e = eigenvalues(x);
      const int chi = legendre(disc, p);
      const EigenKind expected = chi == 0 ? EigenKind::RationalRepeated
                                 : chi == 1 ? EigenKind::RationalDistinct
                                            : EigenKind::IrrationalConjugatePair;
      ASSERT_EQ(e.kind, expected) << x;
      for (const auto& v : e.values) ASSERT_TRUE(char_poly_at(x, v).is_zero()) << x;
    }
  }
}

TEST(GL2Order, Examples) {
  EXPECT_EQ(gl2_order(1), 1u);
  EXPECT_EQ(gl2_order(5), 480u);
  EXPECT_EQ(gl2_order(6), 288u);
  EXPECT_EQ(gl2_order(6), gl2_order(2) * gl2_order(3));
}

TEST(GL2Order, MatchesBruteForceUpTo12) {
  for (std::int64_t n = 2; n <= 12; ++n) {
    EXPECT_EQ(gl2_order(static_cast<std::uint64_t>(n)), brute_force_gl2_count(n)) << n;
  }
}

TEST(GL2Order, MultiplicativeOnCoprimePairs) {
  for (std::uint64_t m = 1; m <= 12; ++m)
    for (std::uint64_t n = 1; n <= 12; ++n) {
      if (std::gcd(m, n) == 1) EXPECT_EQ(gl2_order(m * n), gl2_order(m) * gl2_order(n)) << m << " " << n;
    }
}

TEST(GL2Order, FactorizationSurvivesOverflow) {
  const std::uint64_t n = 12ULL * 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23;
  EXPECT_THROW(gl2_order(n), ResourceError);
  const auto f = gl2_order_factorization(n);
  EXPECT_EQ(f.rbegin()->first, 23u);
  EXPECT_TRUE(gl2_order_factorization(1).empty());
}
