#include "gl2kit/modarith.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "gl2kit/errors.hpp"

namespace gl2kit {

Residue mul_mod(Residue x, Residue y, Residue n) noexcept {
  __extension__ using Wide = __int128;
  const Wide p = static_cast<Wide>(reduce(x, n)) * static_cast<Wide>(reduce(y, n));
  return static_cast<Residue>(p % n);
}

Residue pow_mod(Residue base, std::uint64_t exp, Residue n) noexcept {
  Residue result = 1 % n;
  base = reduce(base, n);
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, n);
    base = mul_mod(base, base, n);
    exp >>= 1U;
  }
  return result;
}

std::optional<Residue> inv_mod(Residue x, Residue n) noexcept {
  Residue r0 = n, r1 = reduce(x, n);
  Residue s0 = 0, s1 = 1;
  while (r1 != 0) {
    const Residue q = r0 / r1;
    r0 = std::exchange(r1, r0 - q * r1);
    s0 = std::exchange(s1, s0 - q * s1);
  }
  if (r0 != 1) return std::nullopt;
  return reduce(s0, n);
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % p == 0) return n == p;
  }
  for (std::uint64_t f = 17; f * f <= n; f += 2) {
    if (n % f == 0) return false;
  }
  return true;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1U);
  return out;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (const auto& [p, e] : factorize(n)) out.push_back(p);
  return out;
}

std::optional<std::uint64_t> min_prime_divisor(std::uint64_t n) {
  if (n <= 1) return std::nullopt;
  return factorize(n).front().first;
}

int legendre(Residue x, Residue p) noexcept {
  x = reduce(x, p);
  if (x == 0) return 0;
  return pow_mod(x, static_cast<std::uint64_t>((p - 1) / 2), p) == 1 ? 1 : -1;
}

std::optional<Residue> sqrt_mod(Residue x, Residue p) {
  x = reduce(x, p);
  if (x == 0) return Residue{0};
  if (legendre(x, p) != 1) return std::nullopt;

  // Tonelli-Shanks with p - 1 = q * 2^s.
  Residue q = p - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  Residue z = 2;
  while (legendre(z, p) != -1) ++z;

  Residue m = s;
  Residue c = pow_mod(z, static_cast<std::uint64_t>(q), p);
  Residue t = pow_mod(x, static_cast<std::uint64_t>(q), p);
  Residue r = pow_mod(x, static_cast<std::uint64_t>((q + 1) / 2), p);
  while (t != 1) {
    Residue i = 0;
    Residue t2 = t;
    while (t2 != 1) {
      t2 = mul_mod(t2, t2, p);
      ++i;
    }
    Residue b = c;
    for (Residue j = 0; j < m - i - 1; ++j) b = mul_mod(b, b, p);
    m = i;
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    r = mul_mod(r, b, p);
  }
  return r;
}

namespace {

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t phi = n;
  for (const auto& [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

// Shrinks a known exponent down to the exact order, given x^group_exp = 1.
template <typename IsOne>
std::uint64_t order_from_exponent(std::uint64_t group_exp, IsOne&& is_one_at) {
  std::uint64_t ord = group_exp;
  for (const auto& [p, e] : factorize(group_exp)) {
    for (unsigned i = 0; i < e && ord % p == 0 && is_one_at(ord / p); ++i) ord /= p;
  }
  return ord;
}

}  // namespace

std::uint64_t multiplicative_order(Residue x, Residue n) {
  if (!inv_mod(x, n)) throw PreconditionError("multiplicative_order: residue not a unit");
  return order_from_exponent(euler_phi(static_cast<std::uint64_t>(n)),
                             [&](std::uint64_t k) { return pow_mod(x, k, n) == 1 % n; });
}

Modulus::Modulus(std::int64_t n) : n_(n), prime_(false) {
  if (n < 2) throw PreconditionError("modulus must be >= 2, got " + std::to_string(n));
  if (n > (std::int64_t{1} << 31)) throw PreconditionError("modulus too large");
  prime_ = gl2kit::is_prime(static_cast<std::uint64_t>(n));
}

void require_odd_prime(std::int64_t ell, const char* what) {
  if (ell < 3 || !is_prime(static_cast<std::uint64_t>(ell))) {
    throw PreconditionError(std::string(what) + ": " + std::to_string(ell) +
                            " is not an odd prime");
  }
}

Residue primitive_root(std::int64_t ell) {
  require_odd_prime(ell, "primitive_root");
  const auto qs = prime_divisors(static_cast<std::uint64_t>(ell - 1));
  for (Residue g = 2; g < ell; ++g) {
    const bool generates = std::all_of(qs.begin(), qs.end(), [&](std::uint64_t q) {
      return pow_mod(g, static_cast<std::uint64_t>(ell - 1) / q, ell) != 1;
    });
    if (generates) return g;
  }
  return 1;  // unreachable for odd primes
}

// ---------------------------------------------------------------------------

Mat2::Mat2(std::int64_t modulus, Residue a, Residue b, Residue c, Residue d) : n_(modulus) {
  if (modulus < 1) throw PreconditionError("matrix modulus must be positive");
  e_ = {reduce(a, n_), reduce(b, n_), reduce(c, n_), reduce(d, n_)};
}

Residue Mat2::det() const noexcept {
  return reduce(mul_mod(e_[0], e_[3], n_) - mul_mod(e_[1], e_[2], n_), n_);
}

Residue Mat2::trace() const noexcept { return reduce(e_[0] + e_[3], n_); }

bool Mat2::is_identity() const noexcept {
  return e_[1] == 0 && e_[2] == 0 && e_[0] == 1 % n_ && e_[3] == 1 % n_;
}

bool Mat2::is_invertible() const noexcept { return inv_mod(det(), n_).has_value(); }

std::uint64_t Mat2::index() const noexcept {
  const auto n = static_cast<std::uint64_t>(n_);
  return ((static_cast<std::uint64_t>(e_[0]) * n + static_cast<std::uint64_t>(e_[1])) * n +
          static_cast<std::uint64_t>(e_[2])) *
             n +
         static_cast<std::uint64_t>(e_[3]);
}

std::size_t Mat2Hash::operator()(const Mat2& m) const noexcept {
  std::size_t h = static_cast<std::size_t>(m.modulus());
  for (Residue e : m.entries()) h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::size_t>(e);
  return h ^ (h >> 29);
}

std::ostream& operator<<(std::ostream& os, const Mat2& m) {
  return os << '(' << m.a() << ' ' << m.b() << "; " << m.c() << ' ' << m.d() << ')';
}

std::string to_string(const Mat2& m) {
  std::ostringstream os;
  os << m;
  return os.str();
}

Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  if (x.modulus() != y.modulus()) {
    throw PreconditionError("mat_mul: modulus mismatch (" + std::to_string(x.modulus()) +
                            " vs " + std::to_string(y.modulus()) + ")");
  }
  const Residue n = x.modulus();
  if (n < (Residue{1} << 31)) {
    return {n, (x.a() * y.a() + x.b() * y.c()) % n, (x.a() * y.b() + x.b() * y.d()) % n,
            (x.c() * y.a() + x.d() * y.c()) % n, (x.c() * y.b() + x.d() * y.d()) % n};
  }
  return {n, mul_mod(x.a(), y.a(), n) + mul_mod(x.b(), y.c(), n),
          mul_mod(x.a(), y.b(), n) + mul_mod(x.b(), y.d(), n),
          mul_mod(x.c(), y.a(), n) + mul_mod(x.d(), y.c(), n),
          mul_mod(x.c(), y.b(), n) + mul_mod(x.d(), y.d(), n)};
}

Mat2 mat_inv(const Mat2& x) {
  const Residue n = x.modulus();
  const auto det_inv = inv_mod(x.det(), n);
  if (!det_inv) throw PreconditionError("singular matrix " + to_string(x));
  const Residue k = *det_inv;
  return {n, mul_mod(x.d(), k, n), mul_mod(-x.b(), k, n), mul_mod(-x.c(), k, n),
          mul_mod(x.a(), k, n)};
}

Mat2 mat_pow(const Mat2& x, std::int64_t k) {
  Mat2 base = k < 0 ? mat_inv(x) : x;
  auto e = static_cast<std::uint64_t>(k < 0 ? -k : k);
  Mat2 result = Mat2::identity(x.modulus());
  while (e > 0) {
    if (e & 1U) result = result * base;
    base = base * base;
    e >>= 1U;
  }
  return result;
}

Mat2 conjugate_by(const Mat2& y, const Mat2& x) { return mat_inv(x) * y * x; }

std::uint64_t element_order(const Mat2& x) {
  if (!x.is_invertible()) throw PreconditionError("element_order: singular matrix " + to_string(x));
  const auto exponent = gl2_order(static_cast<std::uint64_t>(x.modulus()));
  return order_from_exponent(exponent, [&](std::uint64_t k) {
    return mat_pow(x, static_cast<std::int64_t>(k)).is_identity();
  });
}

std::pair<Residue, Residue> act_right(Residue x, Residue y, const Mat2& m) noexcept {
  const Residue n = m.modulus();
  return {reduce(mul_mod(x, m.a(), n) + mul_mod(y, m.c(), n), n),
          reduce(mul_mod(x, m.b(), n) + mul_mod(y, m.d(), n), n)};
}

// ---------------------------------------------------------------------------

QuadExtElem::QuadExtElem(std::int64_t ell, Residue alpha, Residue re, Residue im)
    : ell_(ell), alpha_(reduce(alpha, ell)), re_(reduce(re, ell)), im_(reduce(im, ell)) {
  require_odd_prime(ell, "QuadExtElem");
  if (alpha_ == 0 || multiplicative_order(alpha_, ell) != static_cast<std::uint64_t>(ell - 1)) {
    throw PreconditionError("QuadExtElem: " + std::to_string(alpha) + " does not generate F_" +
                            std::to_string(ell) + "^x");
  }
}

QuadExtElem QuadExtElem::standard(std::int64_t ell, Residue re, Residue im) {
  return {Trusted{}, ell, primitive_root(ell), reduce(re, ell), reduce(im, ell)};
}

void QuadExtElem::check_same_field(const QuadExtElem& other) const {
  if (ell_ != other.ell_ || alpha_ != other.alpha_) {
    throw PreconditionError("QuadExtElem: operands live in different fields");
  }
}

QuadExtElem QuadExtElem::conj() const { return {Trusted{}, ell_, alpha_, re_, reduce(-im_, ell_)}; }

Residue QuadExtElem::norm() const {
  return reduce(mul_mod(re_, re_, ell_) - mul_mod(alpha_, mul_mod(im_, im_, ell_), ell_), ell_);
}

QuadExtElem QuadExtElem::inverse() const {
  const auto k = inv_mod(norm(), ell_);
  if (!k) throw PreconditionError("QuadExtElem: inverse of zero");
  return {Trusted{}, ell_, alpha_, mul_mod(re_, *k, ell_), mul_mod(-im_, *k, ell_)};
}

QuadExtElem QuadExtElem::pow(std::uint64_t k) const {
  QuadExtElem result = rational(1);
  QuadExtElem base = *this;
  while (k > 0) {
    if (k & 1U) result = result * base;
    base = base * base;
    k >>= 1U;
  }
  return result;
}

QuadExtElem QuadExtElem::rational(Residue r) const {
  return {Trusted{}, ell_, alpha_, reduce(r, ell_), 0};
}

QuadExtElem operator+(const QuadExtElem& x, const QuadExtElem& y) {
  x.check_same_field(y);
  const auto p = x.ell_;
  return {QuadExtElem::Trusted{}, p, x.alpha_, reduce(x.re_ + y.re_, p), reduce(x.im_ + y.im_, p)};
}

QuadExtElem operator-(const QuadExtElem& x, const QuadExtElem& y) {
  x.check_same_field(y);
  const auto p = x.ell_;
  return {QuadExtElem::Trusted{}, p, x.alpha_, reduce(x.re_ - y.re_, p), reduce(x.im_ - y.im_, p)};
}

QuadExtElem operator*(const QuadExtElem& x, const QuadExtElem& y) {
  x.check_same_field(y);
  const auto p = x.ell_;
  const Residue re = mul_mod(x.re_, y.re_, p) + mul_mod(x.alpha_, mul_mod(x.im_, y.im_, p), p);
  const Residue im = mul_mod(x.re_, y.im_, p) + mul_mod(x.im_, y.re_, p);
  return {QuadExtElem::Trusted{}, p, x.alpha_, reduce(re, p), reduce(im, p)};
}

QuadExtElem QuadExtElem::operator-() const {
  return {Trusted{}, ell_, alpha_, reduce(-re_, ell_), reduce(-im_, ell_)};
}

std::ostream& operator<<(std::ostream& os, const QuadExtElem& x) {
  if (x.is_rational()) return os << x.re();
  return os << x.re() << '+' << x.im() << "*sqrt(" << x.alpha() << ')';
}

std::uint64_t multiplicative_order(const QuadExtElem& x) {
  if (x.is_zero()) throw PreconditionError("multiplicative_order: zero element");
  const auto p = static_cast<std::uint64_t>(x.ell());
  return order_from_exponent(p * p - 1, [&](std::uint64_t k) { return x.pow(k) == x.rational(1); });
}

const char* to_string(EigenKind kind) {
  switch (kind) {
    case EigenKind::RationalDistinct: return "RationalDistinct";
    case EigenKind::RationalRepeated: return "RationalRepeated";
    case EigenKind::IrrationalConjugatePair: return "IrrationalConjugatePair";
  }
  return "?";
}

EigenResult eigenvalues(const Mat2& x) {
  const std::int64_t p = x.modulus();
  if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) {
    throw PreconditionError("eigenvalues: modulus " + std::to_string(p) + " is not an odd prime");
  }
  const Residue half = (p + 1) / 2;
  const Residue t = x.trace();
  const Residue disc = reduce(mul_mod(t, t, p) - 4 * x.det(), p);
  const auto zero = QuadExtElem::standard(p, 0, 0);

  if (disc == 0) {
    const auto v = zero.rational(mul_mod(t, half, p));
    return {EigenKind::RationalRepeated, {v, v}};
  }
  if (const auto s = sqrt_mod(disc, p)) {
    Residue l1 = mul_mod(t + *s, half, p);
    Residue l2 = mul_mod(t - *s, half, p);
    if (l1 > l2) std::swap(l1, l2);
    return {EigenKind::RationalDistinct, {zero.rational(l1), zero.rational(l2)}};
  }
  // disc is a non-square, so disc / alpha is a square r^2 and sqrt(disc) = r sqrt(alpha).
  const Residue alpha = zero.alpha();
  const auto r = sqrt_mod(mul_mod(disc, *inv_mod(alpha, p), p), p);
  Residue im = mul_mod(*r, half, p);
  if (im > p / 2) im = p - im;
  const QuadExtElem v = QuadExtElem::standard(p, mul_mod(t, half, p), im);
  return {EigenKind::IrrationalConjugatePair, {v, v.conj()}};
}

QuadExtElem char_poly_at(const Mat2& x, const QuadExtElem& lambda) {
  return lambda * lambda - lambda.rational(x.trace()) * lambda + lambda.rational(x.det());
}

// ---------------------------------------------------------------------------

std::map<std::uint64_t, std::uint64_t> gl2_order_factorization(std::uint64_t n) {
  std::map<std::uint64_t, std::uint64_t> out;
  for (const auto& [p, e] : factorize(n)) {
    // p^{4(e-1)} (p^2 - 1)(p^2 - p) = p^{4e-3} (p - 1)^2 (p + 1)
    out[p] += 4ULL * e - 3ULL;
    for (const auto& [q, f] : factorize(p - 1)) out[q] += 2ULL * f;
    for (const auto& [q, f] : factorize(p + 1)) out[q] += f;
  }
  return out;
}

std::uint64_t gl2_order(std::uint64_t n) {
  if (n == 0) throw PreconditionError("gl2_order: n must be positive");
  std::uint64_t result = 1;
  for (const auto& [p, e] : gl2_order_factorization(n)) {
    for (std::uint64_t i = 0; i < e; ++i) {
      if (__builtin_mul_overflow(result, p, &result)) {
        throw ResourceError("gl2_order(" + std::to_string(n) + ") exceeds 64 bits");
      }
    }
  }
  return result;
}

}  // namespace gl2kit
