#pragma once

/**
 * @file modarith.hpp
 * @brief Residue arithmetic over Z/NZ, F_l and F_{l^2} = F_l(sqrt(alpha)),
 *        plus the 2x2 matrix primitives everything else is built on.
 *
 * Residues are kept canonically in [0, N). Matrices act on row vectors from
 * the right, so (x y) * A = (x a + y c, x b + y d).
 */

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace gl2kit {

using Residue = std::int64_t;

// ---------------------------------------------------------------------------
// Integer helpers
// ---------------------------------------------------------------------------

/// Canonical representative of x modulo n, in [0, n).
constexpr Residue reduce(Residue x, Residue n) noexcept {
  x %= n;
  return x < 0 ? x + n : x;
}

Residue mul_mod(Residue x, Residue y, Residue n) noexcept;
Residue pow_mod(Residue base, std::uint64_t exp, Residue n) noexcept;

/// Inverse of x modulo n, or nullopt when gcd(x, n) != 1.
std::optional<Residue> inv_mod(Residue x, Residue n) noexcept;

bool is_prime(std::uint64_t n) noexcept;

/// Prime factorization as (prime, exponent) pairs, primes ascending.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);

std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

/// Smallest prime divisor of n, or nullopt for n = 1.
std::optional<std::uint64_t> min_prime_divisor(std::uint64_t n);

/// Legendre symbol (x / p) for an odd prime p: 0, 1 or -1.
int legendre(Residue x, Residue p) noexcept;

/// A square root of x modulo the odd prime p (Tonelli-Shanks), if x is a square.
std::optional<Residue> sqrt_mod(Residue x, Residue p);

/// Multiplicative order of x modulo n; requires gcd(x, n) = 1.
std::uint64_t multiplicative_order(Residue x, Residue n);

// ---------------------------------------------------------------------------
// Modulus
// ---------------------------------------------------------------------------

/// A modulus N >= 2.
class Modulus {
 public:
  explicit Modulus(std::int64_t n);

  std::int64_t value() const noexcept { return n_; }
  bool is_prime() const noexcept { return prime_; }

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  std::int64_t n_;
  bool prime_;
};

/// Throws PreconditionError unless ell is an odd prime.
void require_odd_prime(std::int64_t ell, const char* what);

/// Smallest generator of F_ell^x for an odd prime ell.
Residue primitive_root(std::int64_t ell);

// ---------------------------------------------------------------------------
// Mat2
// ---------------------------------------------------------------------------

/// A 2x2 matrix over Z/NZ, row-major (a b; c d).
class Mat2 {
 public:
  Mat2(std::int64_t modulus, Residue a, Residue b, Residue c, Residue d);
  Mat2(const Modulus& m, Residue a, Residue b, Residue c, Residue d)
      : Mat2(m.value(), a, b, c, d) {}

  static Mat2 identity(std::int64_t n) { return {n, 1, 0, 0, 1}; }
  /// U = (1 1; 0 1).
  static Mat2 upper_unipotent(std::int64_t n) { return {n, 1, 1, 0, 1}; }
  /// U^t = (1 0; 1 1).
  static Mat2 lower_unipotent(std::int64_t n) { return {n, 1, 0, 1, 1}; }
  static Mat2 diag(std::int64_t n, Residue a, Residue d) { return {n, a, 0, 0, d}; }
  static Mat2 scalar(std::int64_t n, Residue k) { return {n, k, 0, 0, k}; }

  std::int64_t modulus() const noexcept { return n_; }
  Residue a() const noexcept { return e_[0]; }
  Residue b() const noexcept { return e_[1]; }
  Residue c() const noexcept { return e_[2]; }
  Residue d() const noexcept { return e_[3]; }
  const std::array<Residue, 4>& entries() const noexcept { return e_; }

  Residue det() const noexcept;
  Residue trace() const noexcept;
  bool is_identity() const noexcept;
  bool is_invertible() const noexcept;
  bool is_diagonal() const noexcept { return e_[1] == 0 && e_[2] == 0; }
  bool is_scalar() const noexcept { return is_diagonal() && e_[0] == e_[3]; }
  Mat2 transpose() const noexcept { return {n_, e_[0], e_[2], e_[1], e_[3]}; }

  /// Dense index in [0, N^4), lexicographic in (a, b, c, d).
  std::uint64_t index() const noexcept;

  friend bool operator==(const Mat2&, const Mat2&) = default;
  friend auto operator<=>(const Mat2&, const Mat2&) = default;

 private:
  std::int64_t n_;
  std::array<Residue, 4> e_;
};

struct Mat2Hash {
  std::size_t operator()(const Mat2& m) const noexcept;
};

std::ostream& operator<<(std::ostream& os, const Mat2& m);
std::string to_string(const Mat2& m);

/// Standard product reduced mod N. Throws PreconditionError on modulus mismatch.
Mat2 mat_mul(const Mat2& x, const Mat2& y);
inline Mat2 operator*(const Mat2& x, const Mat2& y) { return mat_mul(x, y); }

/// Inverse; throws PreconditionError ("singular matrix") when gcd(det, N) != 1.
Mat2 mat_inv(const Mat2& x);

/// x^k for any integer k (negative powers need x invertible).
Mat2 mat_pow(const Mat2& x, std::int64_t k);

/// x^{-1} y x.
Mat2 conjugate_by(const Mat2& y, const Mat2& x);

/// Least k >= 1 with x^k = I; x must be invertible.
std::uint64_t element_order(const Mat2& x);

/// Row vector (x y) times A.
std::pair<Residue, Residue> act_right(Residue x, Residue y, const Mat2& a) noexcept;

// ---------------------------------------------------------------------------
// F_{l^2} = F_l(sqrt(alpha))
// ---------------------------------------------------------------------------

/// re + im * sqrt(alpha) in F_{l^2}, alpha a generator of F_l^x.
class QuadExtElem {
 public:
  /// Verifies that alpha generates F_ell^x.
  QuadExtElem(std::int64_t ell, Residue alpha, Residue re, Residue im);

  /// Element of F_{l^2} using alpha = primitive_root(ell).
  static QuadExtElem standard(std::int64_t ell, Residue re, Residue im);

  std::int64_t ell() const noexcept { return ell_; }
  Residue alpha() const noexcept { return alpha_; }
  Residue re() const noexcept { return re_; }
  Residue im() const noexcept { return im_; }

  bool is_rational() const noexcept { return im_ == 0; }
  bool is_zero() const noexcept { return re_ == 0 && im_ == 0; }

  /// Image under the Frobenius: re - im * sqrt(alpha).
  QuadExtElem conj() const;
  /// Field norm x * conj(x), an element of F_l.
  Residue norm() const;
  QuadExtElem inverse() const;
  QuadExtElem pow(std::uint64_t k) const;
  /// Lift of a rational residue into the same field.
  QuadExtElem rational(Residue r) const;

  friend QuadExtElem operator+(const QuadExtElem& x, const QuadExtElem& y);
  friend QuadExtElem operator-(const QuadExtElem& x, const QuadExtElem& y);
  friend QuadExtElem operator*(const QuadExtElem& x, const QuadExtElem& y);
  QuadExtElem operator-() const;

  friend bool operator==(const QuadExtElem&, const QuadExtElem&) = default;

 private:
  struct Trusted {};
  QuadExtElem(Trusted, std::int64_t ell, Residue alpha, Residue re, Residue im) noexcept
      : ell_(ell), alpha_(alpha), re_(re), im_(im) {}
  void check_same_field(const QuadExtElem& other) const;

  std::int64_t ell_;
  Residue alpha_;
  Residue re_;
  Residue im_;
};

std::ostream& operator<<(std::ostream& os, const QuadExtElem& x);

/// Multiplicative order of a nonzero element of F_{l^2}.
std::uint64_t multiplicative_order(const QuadExtElem& x);

enum class EigenKind { RationalDistinct, RationalRepeated, IrrationalConjugatePair };

const char* to_string(EigenKind kind);

struct EigenResult {
  EigenKind kind;
  /// Rational values have im() == 0 and are sorted ascending. For an
  /// irrational pair, values[1] == values[0].conj().
  std::array<QuadExtElem, 2> values;
};

/// Eigenvalues of x over F_l; the modulus must be an odd prime.
EigenResult eigenvalues(const Mat2& x);

/// Characteristic polynomial lambda^2 - t lambda + D evaluated at lambda.
QuadExtElem char_poly_at(const Mat2& x, const QuadExtElem& lambda);

// ---------------------------------------------------------------------------
// |GL_2(Z/nZ)|
// ---------------------------------------------------------------------------

/// Prime factorization of |GL_2(Z/nZ)| as prime -> exponent; n = 1 gives {}.
std::map<std::uint64_t, std::uint64_t> gl2_order_factorization(std::uint64_t n);

/// |GL_2(Z/nZ)| = prod over p^e || n of p^{4(e-1)} (p^2 - 1)(p^2 - p).
/// Throws ResourceError if the value does not fit in 64 bits.
std::uint64_t gl2_order(std::uint64_t n);

}  // namespace gl2kit
