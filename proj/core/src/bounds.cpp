#include "gl2kit/bounds.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "gl2kit/classify.hpp"
#include "gl2kit/errors.hpp"
#include "gl2kit/modarith.hpp"

namespace gl2kit {

namespace {

constexpr std::uint64_t kMaxEnumerated = 1ULL << 24;

std::uint64_t checked_mul(std::uint64_t x, std::uint64_t y, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(x, y, &out)) throw ResourceError(std::string(what) + " overflows 64 bits");
  return out;
}

std::uint64_t tau_of(std::uint64_t ell) { return ell % 3 == 1 ? 3 : 1; }

std::vector<bool> prime_table(std::uint64_t limit) {
  std::vector<bool> prime(limit + 1, true);
  prime[0] = false;
  if (limit >= 1) prime[1] = false;
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (!prime[i]) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) prime[j] = false;
  }
  return prime;
}

}  // namespace

void validate(const FieldInput& input) {
  if (input.merel_constant < 1) throw PreconditionError("merel_constant must be >= 1");
  if (input.lv14_bound < 1) throw PreconditionError("lv14_bound must be >= 1");
  for (const std::uint64_t ell : input.pdi2_primes) {
    if (!is_prime(ell)) throw PreconditionError("pdi2_primes entry " + std::to_string(ell) + " is not prime");
    if (ell % 4 != 3) throw PreconditionError("pdi2_primes entry " + std::to_string(ell) + " is not 3 mod 4");
  }
}

std::vector<std::uint64_t> congruence_sieve(std::uint64_t limit) {
  if (limit < 2) throw PreconditionError("congruence_sieve: limit must be >= 2");
  if (limit > (1ULL << 32)) throw ResourceError("congruence_sieve: limit above 2^32");
  const std::vector<bool> prime = prime_table(limit);
  std::vector<std::uint64_t> out;
  for (std::uint64_t ell = 2; ell <= limit; ++ell) {
    if (prime[ell] && mod36_filter(static_cast<std::int64_t>(ell))) out.push_back(ell);
  }
  return out;
}

std::set<std::uint64_t> r_set(const FieldInput& input) {
  validate(input);
  std::set<std::uint64_t> out;
  for (const std::uint64_t ell : input.pdi2_primes) {
    if (!mod36_filter(static_cast<std::int64_t>(ell))) continue;
    for (const std::uint64_t q : prime_divisors(ell - 1)) out.insert(q);
  }
  return out;
}

std::uint64_t p_bound(const FieldInput& input) {
  std::set<std::uint64_t> candidates = r_set(input);
  for (const std::uint64_t q : prime_divisors(input.merel_constant)) candidates.insert(q);
  for (const std::uint64_t q : prime_divisors(input.lv14_bound)) candidates.insert(q);
  if (candidates.empty()) throw PreconditionError("p_bound: M N_K = 1 and R(K) is empty; no bound is defined");
  return *candidates.rbegin();
}

BoundReport bound_report(const FieldInput& input, std::uint64_t window) {
  return {r_set(input), p_bound(input), congruence_sieve(window)};
}

SmallPrimeReport smallprime_coprimality(std::uint64_t d, std::uint64_t p, std::uint64_t m) {
  if (d < 1 || m < 1) throw PreconditionError("smallprime_coprimality: d and M must be >= 1");
  if (!is_prime(p)) throw PreconditionError("smallprime_coprimality: p = " + std::to_string(p) + " is not prime");
  if (const auto q = min_prime_divisor(d); q && *q <= p) {
    throw PreconditionError("smallprime_coprimality: d has the prime divisor " + std::to_string(*q) + " <= p");
  }
  for (const std::uint64_t q : prime_divisors(m)) {
    if (q > p) throw PreconditionError("smallprime_coprimality: M has the prime divisor " + std::to_string(q) + " > p");
  }

  SmallPrimeReport r{d, p, m, m, std::nullopt, {}, 1};
  for (std::uint64_t q = 2; q <= p; ++q) {
    if (is_prime(q)) r.modulus = checked_mul(r.modulus, q, "M * primorial(p)");
  }
  r.group_order_factorization = gl2_order_factorization(r.modulus);
  try {
    r.group_order = gl2_order(r.modulus);
  } catch (const ResourceError&) {
    r.group_order = std::nullopt;
  }
  for (const auto& [q, e] : factorize(d)) {
    const auto it = r.group_order_factorization.find(q);
    if (it == r.group_order_factorization.end()) continue;
    for (std::uint64_t k = 0; k < std::min<std::uint64_t>(e, it->second); ++k) r.gcd *= q;
  }
  if (r.gcd != 1) {
    throw LemmaViolation("small-prime", "gcd(d, |GL_2(Z/" + std::to_string(r.modulus) + ")|) = " +
                                            std::to_string(r.gcd));
  }
  return r;
}

// ---- finite abelian groups -------------------------------------------------

std::uint64_t AbelianGroupSpec::order() const {
  std::uint64_t n = 1;
  for (const std::uint64_t k : cyclic_orders) {
    if (k < 1) throw PreconditionError("cyclic factor orders must be >= 1");
    n = checked_mul(n, k, "abelian group order");
  }
  return n;
}

namespace {

class Codec {
 public:
  explicit Codec(const AbelianGroupSpec& g) : orders_(g.cyclic_orders) {
    if (g.order() > kMaxEnumerated) throw ResourceError("abelian group of order above 2^24");
  }

  std::uint64_t encode(const AbelianElement& x) const {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i) code = code * orders_[i] + x[i];
    return code;
  }

  AbelianElement add(const AbelianElement& x, const AbelianElement& y) const {
    AbelianElement out(orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) out[i] = (x[i] + y[i]) % orders_[i];
    return out;
  }

  AbelianElement scale(const AbelianElement& x, std::uint64_t k) const {
    AbelianElement out(orders_.size());
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      out[i] = mul_mod(static_cast<Residue>(x[i]), static_cast<Residue>(k % orders_[i]),
                       static_cast<Residue>(orders_[i]));
    }
    return out;
  }

  bool is_zero(const AbelianElement& x) const {
    return std::all_of(x.begin(), x.end(), [](std::uint64_t v) { return v == 0; });
  }

  /// Every element of the subgroup killed by ell^k (the whole l-primary part
  /// when k is large), enumerated coordinatewise.
  std::vector<AbelianElement> torsion(std::uint64_t ell, std::uint64_t k) const {
    std::vector<AbelianElement> out{AbelianElement(orders_.size(), 0)};
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      // x in Z/m with ell^k x = 0 iff x is a multiple of m / gcd(m, ell^k).
      const std::uint64_t m = orders_[i];
      std::uint64_t g = 1;
      for (std::uint64_t j = 0; j < k && m % (g * ell) == 0; ++j) g *= ell;
      const std::uint64_t step = m / g;
      std::vector<AbelianElement> next;
      for (const auto& x : out) {
        for (std::uint64_t v = 0; v < m; v += step) {
          next.push_back(x);
          next.back()[i] = v;
        }
      }
      out = std::move(next);
    }
    return out;
  }

  /// Exponent of ell in the group exponent.
  std::uint64_t ell_valuation(std::uint64_t ell) const {
    std::uint64_t best = 0;
    for (std::uint64_t m : orders_) {
      std::uint64_t v = 0;
      for (; m % ell == 0; m /= ell) ++v;
      best = std::max(best, v);
    }
    return best;
  }

  const std::vector<std::uint64_t>& orders() const { return orders_; }

 private:
  std::vector<std::uint64_t> orders_;
};

AbelianElement apply(const Codec& a, const Codec& b, const AbelianEmbedding& f, const AbelianElement& x) {
  AbelianElement out(b.orders().size(), 0);
  for (std::size_t i = 0; i < a.orders().size(); ++i) out = b.add(out, b.scale(f[i], x[i]));
  return out;
}

std::unordered_set<std::uint64_t> image_codes(const Codec& a, const Codec& b, const AbelianEmbedding& f,
                                              const std::vector<AbelianElement>& xs) {
  std::unordered_set<std::uint64_t> out;
  for (const auto& x : xs) out.insert(b.encode(apply(a, b, f, x)));
  return out;
}

std::unordered_set<std::uint64_t> codes(const Codec& b, const std::vector<AbelianElement>& xs) {
  std::unordered_set<std::uint64_t> out;
  for (const auto& x : xs) out.insert(b.encode(x));
  return out;
}

}  // namespace

void validate_embedding(const AbelianGroupSpec& a, const AbelianGroupSpec& b, const AbelianEmbedding& f) {
  const Codec ca(a);
  const Codec cb(b);
  if (f.size() != a.cyclic_orders.size()) throw PreconditionError("embedding: one image per generator of A is required");
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].size() != b.cyclic_orders.size()) throw PreconditionError("embedding: image has the wrong length");
    for (std::size_t j = 0; j < f[i].size(); ++j) {
      if (f[i][j] >= b.cyclic_orders[j]) throw PreconditionError("embedding: coordinate out of range");
    }
    if (!cb.is_zero(cb.scale(f[i], a.cyclic_orders[i]))) {
      throw PreconditionError("embedding: image of generator " + std::to_string(i) + " has order not dividing " +
                              std::to_string(a.cyclic_orders[i]));
    }
  }
  // A nontrivial kernel contains an element of prime order q dividing |A|, so
  // it suffices to check A[q] for each such q.
  for (const std::uint64_t q : prime_divisors(a.order())) {
    const std::vector<AbelianElement> socle = ca.torsion(q, 1);
    if (image_codes(ca, cb, f, socle).size() != socle.size()) {
      throw PreconditionError("embedding: map is not injective");
    }
  }
}

const char* to_string(LPartVerdict verdict) {
  return verdict == LPartVerdict::HypothesisFails ? "HypothesisFails" : "ConclusionVerified";
}

LPartResult l_part_check(const AbelianGroupSpec& a, const AbelianGroupSpec& b, const AbelianEmbedding& f,
                         std::uint64_t ell, std::uint64_t n, std::uint64_t n_prime) {
  if (!is_prime(ell)) throw PreconditionError("l_part_check: l is not prime");
  if (n_prime <= n) throw PreconditionError("l_part_check: n' must exceed n");
  validate_embedding(a, b, f);
  const Codec ca(a);
  const Codec cb(b);

  const auto a_n = image_codes(ca, cb, f, ca.torsion(ell, n));
  const auto a_np = image_codes(ca, cb, f, ca.torsion(ell, n_prime));
  const auto b_np = codes(cb, cb.torsion(ell, n_prime));
  const std::uint64_t k = std::max(ca.ell_valuation(ell), cb.ell_valuation(ell));
  const auto a_inf = image_codes(ca, cb, f, ca.torsion(ell, k));
  const auto b_inf = codes(cb, cb.torsion(ell, k));

  LPartResult r{LPartVerdict::HypothesisFails, a_n.size(), a_np.size(), b_np.size(), a_inf.size(), b_inf.size()};
  if (b_np != a_np || a_np != a_n) return r;
  if (b_inf != a_inf) {
    throw LemmaViolation("l-part", "B[l^n'] = A[l^n'] = A[l^n] holds but |B[l^oo]| = " + std::to_string(b_inf.size()) +
                                       " and |A[l^oo]| = " + std::to_string(a_inf.size()));
  }
  r.verdict = LPartVerdict::ConclusionVerified;
  return r;
}

PreservationReport torsion_preservation_report(const FieldInput& input, std::uint64_t d) {
  if (d < 1) throw PreconditionError("torsion_preservation_report: d must be >= 1");
  const std::uint64_t p_k = p_bound(input);
  PreservationReport r{p_k, d, min_prime_divisor(d), false, std::nullopt, {}};
  r.covered = !r.min_prime_divisor || *r.min_prime_divisor > p_k;
  if (!r.covered) return r;

  r.certificate = smallprime_coprimality(d, p_k, input.merel_constant);
  for (std::uint64_t ell = 2; ell <= p_k; ++ell) {
    if (!is_prime(ell)) continue;
    r.ledger.push_back({ell, true, mod36_filter(static_cast<std::int64_t>(ell)), 0, std::gcd(d, ell)});
  }
  std::vector<std::uint64_t> large = input.pdi2_primes;
  std::sort(large.begin(), large.end());
  large.erase(std::unique(large.begin(), large.end()), large.end());
  for (const std::uint64_t ell : large) {
    if (ell <= p_k) continue;
    const std::uint64_t divisor = (ell - 1) / (2 * tau_of(ell));
    r.ledger.push_back({ell, false, mod36_filter(static_cast<std::int64_t>(ell)), divisor, std::gcd(d, divisor)});
  }
  return r;
}

}  // namespace gl2kit
