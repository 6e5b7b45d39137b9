#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "gl2kit/bounds.hpp"
#include "gl2kit/classify.hpp"
#include "gl2kit/errors.hpp"
#include "gl2kit/modarith.hpp"

using namespace gl2kit;

namespace {

FieldInput field(std::uint64_t m, std::uint64_t n_k, std::vector<std::uint64_t> pdi2) {
  FieldInput in;
  in.label = "test";
  in.merel_constant = m;
  in.lv14_bound = n_k;
  in.pdi2_primes = std::move(pdi2);
  return in;
}

// |A[l^k]| for A = sum of Z/m_i: product of gcd(m_i, l^k).
std::uint64_t torsion_size(const AbelianGroupSpec& g, std::uint64_t ell, std::uint64_t k) {
  std::uint64_t pk = 1;
  for (std::uint64_t i = 0; i < k; ++i) pk *= ell;
  std::uint64_t out = 1;
  for (const std::uint64_t m : g.cyclic_orders) out *= std::gcd(m, pk);
  return out;
}

std::uint64_t full_torsion_size(const AbelianGroupSpec& g, std::uint64_t ell) {
  return torsion_size(g, ell, 64 / ell + 8);
}

}  // namespace

TEST(CongruenceSieve, Examples) {
  EXPECT_EQ(congruence_sieve(12), (std::vector<std::uint64_t>{7, 11}));
  EXPECT_EQ(congruence_sieve(100), (std::vector<std::uint64_t>{7, 11, 23, 31, 43, 47, 59, 67, 71, 79, 83}));
  EXPECT_TRUE(congruence_sieve(6).empty());
  EXPECT_THROW(congruence_sieve(1), PreconditionError);
}

TEST(CongruenceSieve, IsPrimesIntersectFilter) {
  const std::vector<std::uint64_t> sieve = congruence_sieve(20000);
  std::vector<std::uint64_t> expected;
  for (std::uint64_t p = 2; p <= 20000; ++p) {
    if (is_prime(p) && mod36_filter(static_cast<std::int64_t>(p))) expected.push_back(p);
  }
  EXPECT_EQ(sieve, expected);
}

TEST(RSet, Examples) {
  EXPECT_EQ(r_set(field(1, 1, {7, 11})), (std::set<std::uint64_t>{2, 3, 5}));
  EXPECT_EQ(r_set(field(1, 1, {7, 11, 23})), (std::set<std::uint64_t>{2, 3, 5, 11}));
  EXPECT_TRUE(r_set(field(1, 1, {})).empty());
  EXPECT_THROW(r_set(field(1, 1, {15})), PreconditionError);
  EXPECT_THROW(r_set(field(1, 1, {13})), PreconditionError);
}

TEST(RSet, SkipsPrimesOutsideTheFilter) {
  // 19 = 3 mod 4 but 19 = 1 mod 9.
  EXPECT_TRUE(r_set(field(1, 1, {19})).empty());
}

TEST(PBound, Examples) {
  EXPECT_EQ(p_bound(field(210, 13, {7, 11, 23})), 13u);
  EXPECT_EQ(p_bound(field(2, 2, {})), 2u);
  EXPECT_EQ(p_bound(field(7, 1, {47})), 23u);
  EXPECT_THROW(p_bound(field(1, 1, {})), PreconditionError);
}

TEST(PBound, IsAlwaysPrime) {
  std::mt19937_64 rng(23);
  const std::vector<std::uint64_t> pool = congruence_sieve(500);
  std::uniform_int_distribution<std::uint64_t> mdist(2, 5000);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < 500; ++i) {
    const FieldInput in = field(mdist(rng), mdist(rng), {pool[pick(rng)], pool[pick(rng)]});
    const std::uint64_t p = p_bound(in);
    EXPECT_TRUE(is_prime(p));
    for (const std::uint64_t q : r_set(in)) EXPECT_LE(q, p);
  }
}

TEST(BoundReport, CarriesAllParts) {
  const BoundReport r = bound_report(field(210, 13, {7, 11, 23}), 50);
  EXPECT_EQ(r.p_k, 13u);
  EXPECT_EQ(r.r_set, (std::set<std::uint64_t>{2, 3, 5, 11}));
  EXPECT_EQ(r.sieve_window, (std::vector<std::uint64_t>{7, 11, 23, 31, 43, 47}));
}

TEST(SmallPrime, Examples) {
  const SmallPrimeReport a = smallprime_coprimality(11, 7, 12);
  EXPECT_EQ(a.modulus, 2520u);
  EXPECT_EQ(a.gcd, 1u);
  ASSERT_TRUE(a.group_order.has_value());
  EXPECT_EQ(*a.group_order, gl2_order(2520));
  for (const auto& [q, e] : a.group_order_factorization) EXPECT_LE(q, 7u);

  EXPECT_EQ(smallprime_coprimality(121, 7, 1).gcd, 1u);
  EXPECT_EQ(smallprime_coprimality(1, 2, 1).gcd, 1u);
}

TEST(SmallPrime, Preconditions) {
  EXPECT_THROW(smallprime_coprimality(10, 7, 1), PreconditionError);
  EXPECT_THROW(smallprime_coprimality(11, 7, 22), PreconditionError);
  EXPECT_THROW(smallprime_coprimality(11, 8, 1), PreconditionError);
}

// |GL_2(F_2)| = 6, so p = 2 fails whenever 3 | d; covered separately below.
TEST(SmallPrime, GridCoprimeForOddP) {
  std::size_t checked = 0;
  for (const std::uint64_t p : {3, 5, 7}) {
    for (std::uint64_t d = 1; d <= 500; ++d) {
      const auto q = min_prime_divisor(d);
      if (q && *q <= p) continue;
      for (std::uint64_t m = 1; m <= 50; ++m) {
        const auto divs = prime_divisors(m);
        if (!divs.empty() && divs.back() > p) continue;
        const SmallPrimeReport r = smallprime_coprimality(d, p, m);
        ASSERT_EQ(r.gcd, 1u);
        if (r.group_order) ASSERT_EQ(std::gcd(d, *r.group_order), 1u);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 9000u);
}

TEST(SmallPrime, PrimeTwoFailsExactlyWhenThreeDividesD) {
  for (std::uint64_t d = 1; d <= 500; d += 2) {
    for (const std::uint64_t m : {1, 2, 4, 8, 16, 32}) {
      if (d % 3 == 0) {
        EXPECT_THROW(smallprime_coprimality(d, 2, m), LemmaViolation) << d;
      } else {
        EXPECT_EQ(smallprime_coprimality(d, 2, m).gcd, 1u) << d;
      }
    }
  }
}

TEST(Embedding, Validation) {
  const AbelianGroupSpec z5{{5}};
  const AbelianGroupSpec z25{{25}};
  EXPECT_NO_THROW(validate_embedding(z5, z25, {{5}}));
  EXPECT_THROW(validate_embedding(z5, z25, {{1}}), PreconditionError);   // not a homomorphism
  EXPECT_THROW(validate_embedding(z5, z25, {{0}}), PreconditionError);   // not injective
  EXPECT_THROW(validate_embedding(z5, z25, {{5, 0}}), PreconditionError);
  EXPECT_THROW(validate_embedding(z5, z25, {}), PreconditionError);

  const AbelianGroupSpec z6{{6}};
  EXPECT_NO_THROW(validate_embedding(z6, z6, {{5}}));
  EXPECT_THROW(validate_embedding(z6, z6, {{2}}), PreconditionError);  // kernel {0, 3}
  EXPECT_THROW(validate_embedding(z6, z6, {{3}}), PreconditionError);  // kernel {0, 2, 4}
  const AbelianGroupSpec z2z2{{2, 2}};
  EXPECT_THROW(validate_embedding(z2z2, AbelianGroupSpec{{4}}, {{2}, {2}}), PreconditionError);
  EXPECT_NO_THROW(validate_embedding(AbelianGroupSpec{{1}}, z5, {{0}}));
}

TEST(LPart, Examples) {
  const AbelianGroupSpec z5{{5}};
  EXPECT_EQ(l_part_check(z5, z5, {{1}}, 5, 1, 2).verdict, LPartVerdict::ConclusionVerified);
  const LPartResult r = l_part_check(z5, AbelianGroupSpec{{25}}, {{5}}, 5, 1, 2);
  EXPECT_EQ(r.verdict, LPartVerdict::HypothesisFails);
  EXPECT_EQ(r.b_nprime, 25u);
  EXPECT_EQ(r.a_nprime, 5u);
  const AbelianGroupSpec a{{3, 4}};
  const AbelianGroupSpec b{{3, 8}};
  EXPECT_EQ(l_part_check(a, b, {{1, 0}, {0, 2}}, 2, 2, 3).verdict, LPartVerdict::HypothesisFails);
  EXPECT_THROW(l_part_check(z5, z5, {{1}}, 5, 2, 2), PreconditionError);
  EXPECT_THROW(l_part_check(z5, z5, {{1}}, 4, 1, 2), PreconditionError);
}

TEST(LPart, VerdictMatchesCountingOracle) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<std::uint64_t> order(1, 16);
  std::uniform_int_distribution<std::uint64_t> scale(1, 4);
  std::uniform_int_distribution<int> factors(1, 3);
  const std::uint64_t primes[] = {2, 3, 5};
  std::size_t verified = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    AbelianGroupSpec a;
    AbelianGroupSpec b;
    AbelianEmbedding f;
    const int k = factors(rng);
    for (int i = 0; i < k; ++i) {
      const std::uint64_t m = order(rng);
      const std::uint64_t s = scale(rng);
      a.cyclic_orders.push_back(m);
      b.cyclic_orders.push_back(m * s);
    }
    for (int i = 0; i < k; ++i) {
      AbelianElement img(static_cast<std::size_t>(k), 0);
      const std::uint64_t bi = b.cyclic_orders[static_cast<std::size_t>(i)];
      img[static_cast<std::size_t>(i)] = (bi / a.cyclic_orders[static_cast<std::size_t>(i)]) % bi;
      f.push_back(img);
    }
    const std::uint64_t ell = primes[trial % 3];
    const std::uint64_t n = static_cast<std::uint64_t>(trial % 3);
    const std::uint64_t n_prime = n + 1 + static_cast<std::uint64_t>(trial % 2);
    const LPartResult r = l_part_check(a, b, f, ell, n, n_prime);

    ASSERT_EQ(r.a_n, torsion_size(a, ell, n));
    ASSERT_EQ(r.a_nprime, torsion_size(a, ell, n_prime));
    ASSERT_EQ(r.b_nprime, torsion_size(b, ell, n_prime));
    ASSERT_EQ(r.a_infty, full_torsion_size(a, ell));
    ASSERT_EQ(r.b_infty, full_torsion_size(b, ell));
    const bool hypothesis = r.b_nprime == r.a_nprime && r.a_nprime == r.a_n;
    ASSERT_EQ(r.verdict == LPartVerdict::ConclusionVerified, hypothesis);
    if (hypothesis) {
      ASSERT_EQ(r.a_infty, r.b_infty);
      ++verified;
    }
  }
  EXPECT_GT(verified, 100u);
}

TEST(TorsionPreservation, Examples) {
  const FieldInput in = field(210, 13, {7, 11, 23});
  const PreservationReport r = torsion_preservation_report(in, 17);
  EXPECT_EQ(r.p_k, 13u);
  EXPECT_TRUE(r.covered);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_EQ(r.certificate->gcd, 1u);
  std::vector<std::uint64_t> small;
  for (const LedgerRow& row : r.ledger)
    if (row.small) small.push_back(row.ell);
  EXPECT_EQ(small, (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13}));
  const auto large = std::find_if(r.ledger.begin(), r.ledger.end(), [](const LedgerRow& x) { return !x.small; });
  ASSERT_NE(large, r.ledger.end());
  EXPECT_EQ(large->ell, 23u);
  EXPECT_EQ(large->divisor, 11u);
  EXPECT_EQ(large->gcd_with_d, 1u);

  const PreservationReport uncovered = torsion_preservation_report(in, 10);
  EXPECT_FALSE(uncovered.covered);
  EXPECT_EQ(uncovered.min_prime_divisor, 2u);
  EXPECT_TRUE(uncovered.ledger.empty());

  const PreservationReport seven = torsion_preservation_report(field(7, 1, {}), 11);
  EXPECT_EQ(seven.p_k, 7u);
  EXPECT_TRUE(seven.covered);
}
