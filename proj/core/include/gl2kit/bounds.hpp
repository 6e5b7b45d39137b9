#pragma once

/**
 * @file bounds.hpp
 * @brief The torsion-preservation bound: the mod-36 congruence sieve, the
 *        prime set R(K) from a supplied list of Type-2 isogeny primes, the
 *        prime p_K, the coprimality argument for |GL_2(Z/NZ)|, and the
 *        l-primary comparison for finite abelian groups.
 *
 * Field data (Merel constant, the bound N_K, the isogeny primes) are inputs.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gl2kit {

struct FieldInput {
  std::string label;
  /// M(K) >= 1.
  std::uint64_t merel_constant = 1;
  /// N_K >= 1.
  std::uint64_t lv14_bound = 1;
  /// Primes l = 3 mod 4 carrying a Type-2 isogeny.
  std::vector<std::uint64_t> pdi2_primes;
};

/// PreconditionError unless M, N_K >= 1 and every listed l is a prime = 3 mod 4.
void validate(const FieldInput& input);

/// Primes l <= limit with l mod 36 in {7, 11, 23, 31, 35}, ascending.
std::vector<std::uint64_t> congruence_sieve(std::uint64_t limit);

/// Prime divisors of l - 1 over the listed l that pass the mod-36 filter.
std::set<std::uint64_t> r_set(const FieldInput& input);

/// max(R(K) ∪ {p : p | M N_K}).
std::uint64_t p_bound(const FieldInput& input);

struct BoundReport {
  std::set<std::uint64_t> r_set;
  std::uint64_t p_k;
  std::vector<std::uint64_t> sieve_window;
};

BoundReport bound_report(const FieldInput& input, std::uint64_t window = 100);

struct SmallPrimeReport {
  std::uint64_t d;
  std::uint64_t p;
  std::uint64_t m;
  /// M times the product of the primes <= p.
  std::uint64_t modulus;
  /// |GL_2(Z/NZ)| when it fits in 64 bits.
  std::optional<std::uint64_t> group_order;
  std::map<std::uint64_t, std::uint64_t> group_order_factorization;
  std::uint64_t gcd;
};

/// For d whose prime divisors all exceed p and M whose prime divisors are
/// all <= p: gcd(d, |GL_2(Z/NZ)|) = 1 with N = M * primorial(p).
SmallPrimeReport smallprime_coprimality(std::uint64_t d, std::uint64_t p, std::uint64_t m);

/// Direct sum of cyclic groups Z/k for k in cyclic_orders.
struct AbelianGroupSpec {
  std::vector<std::uint64_t> cyclic_orders;

  std::uint64_t order() const;
};

/// Element of an AbelianGroupSpec, one coordinate per cyclic factor.
using AbelianElement = std::vector<std::uint64_t>;

/// Images of the standard generators of A, one per cyclic factor.
using AbelianEmbedding = std::vector<AbelianElement>;

/// PreconditionError unless the images define an injective homomorphism a -> b.
void validate_embedding(const AbelianGroupSpec& a, const AbelianGroupSpec& b, const AbelianEmbedding& f);

enum class LPartVerdict { HypothesisFails, ConclusionVerified };
const char* to_string(LPartVerdict verdict);

struct LPartResult {
  LPartVerdict verdict;
  std::uint64_t a_n;        ///< |A[l^n]|
  std::uint64_t a_nprime;   ///< |A[l^n']|
  std::uint64_t b_nprime;   ///< |B[l^n']|
  std::uint64_t a_infty;    ///< |A[l^oo]|
  std::uint64_t b_infty;    ///< |B[l^oo]|
};

/// If B[l^n'] = A[l^n'] = A[l^n] (n < n'), checks B[l^oo] = A[l^oo], all by
/// enumeration inside B.
LPartResult l_part_check(const AbelianGroupSpec& a, const AbelianGroupSpec& b, const AbelianEmbedding& f,
                         std::uint64_t ell, std::uint64_t n, std::uint64_t n_prime);

struct LedgerRow {
  std::uint64_t ell;
  /// true: l <= p_K, false: listed isogeny prime above p_K.
  bool small;
  bool passes_mod36;
  /// (l - 1) / (2 tau) for large rows, 0 otherwise.
  std::uint64_t divisor;
  /// gcd(d, divisor) for large rows; gcd(d, l) for small rows.
  std::uint64_t gcd_with_d;
};

struct PreservationReport {
  std::uint64_t p_k;
  std::uint64_t d;
  std::optional<std::uint64_t> min_prime_divisor;
  /// Every prime divisor of d exceeds p_K.
  bool covered;
  std::optional<SmallPrimeReport> certificate;
  std::vector<LedgerRow> ledger;
};

PreservationReport torsion_preservation_report(const FieldInput& input, std::uint64_t d);

}  // namespace gl2kit
