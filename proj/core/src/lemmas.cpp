#include "gl2kit/lemmas.hpp"

#include <algorithm>
#include <array>

#include "gl2kit/errors.hpp"
#include "gl2kit/stabilizers.hpp"

namespace gl2kit {

namespace {

void require_field(const Subgroup& h, const char* what) {
  if (!h.modulus().is_prime() || h.n() == 2) {
    throw PreconditionError(std::string(what) + ": modulus must be an odd prime");
  }
}

bool divides(std::int64_t p, std::size_t n) { return n % static_cast<std::size_t>(p) == 0; }

// Order of x inside a group of known order.
std::size_t order_in_group(const Mat2& x, std::size_t group_order) {
  std::size_t ord = group_order;
  for (const auto& [p, e] : factorize(group_order)) {
    for (unsigned i = 0; i < e && mat_pow(x, static_cast<std::int64_t>(ord / p)).is_identity(); ++i) {
      ord /= p;
    }
  }
  return ord;
}

// ---- SL_2 words -----------------------------------------------------------

class WordBuilder {
 public:
  explicit WordBuilder(std::int64_t ell) : ell_(ell) {}

  WordBuilder& push(SL2Letter letter, Residue exponent) {
    exponent = reduce(exponent, ell_);
    if (exponent == 0) return *this;
    if (!letters_.empty() && letters_.back().letter == letter) {
      auto& last = letters_.back();
      last.exponent = reduce(last.exponent + exponent, ell_);
      if (last.exponent == 0) letters_.pop_back();
      return *this;
    }
    letters_.push_back({letter, exponent});
    return *this;
  }

  // (0 -s^{-1}; s 0) = U^{-s^{-1}} (U^t)^s U^{-s^{-1}}
  WordBuilder& push_antidiagonal(Residue s) {
    const Residue s_inv = *inv_mod(s, ell_);
    return push(SL2Letter::U, -s_inv).push(SL2Letter::Ut, s).push(SL2Letter::U, -s_inv);
  }

  // diag(s, s^{-1}) = (U^t)^{-1} U (U^t)^{-1} (0 -s^{-1}; s 0)
  WordBuilder& push_diagonal(Residue s) {
    if (reduce(s, ell_) == 1) return *this;
    push(SL2Letter::Ut, -1).push(SL2Letter::U, 1).push(SL2Letter::Ut, -1);
    return push_antidiagonal(s);
  }

  SL2Word build() && { return {ell_, std::move(letters_)}; }

 private:
  std::int64_t ell_;
  std::vector<SL2Factor> letters_;
};

// ---- 2x2 matrices over F_{l^2} --------------------------------------------

struct QuadMat {
  std::array<QuadExtElem, 4> e;  // row-major

  QuadMat operator*(const QuadMat& o) const {
    return {{e[0] * o.e[0] + e[1] * o.e[2], e[0] * o.e[1] + e[1] * o.e[3],
             e[2] * o.e[0] + e[3] * o.e[2], e[2] * o.e[1] + e[3] * o.e[3]}};
  }
  QuadExtElem det() const { return e[0] * e[3] - e[1] * e[2]; }
  QuadMat inverse() const {
    const QuadExtElem k = det().inverse();
    return {{e[3] * k, -e[1] * k, -e[2] * k, e[0] * k}};
  }
};

// P^{-1} R P = diag(mu, conj mu) = Q^{-1} S Q with mu = a + b sqrt(alpha),
// R = (t u; v 2a - t), S = (a  b alpha; b  a). Returns T = P Q^{-1} when it is
// defined over F_l.
std::optional<Mat2> nonsplit_conjugator(const Mat2& r) {
  const std::int64_t p = r.modulus();
  const EigenResult eig = eigenvalues(r);
  const QuadExtElem mu = eig.values[0];
  const QuadExtElem mu_bar = eig.values[1];
  const QuadExtElem t = mu.rational(r.a());
  const QuadExtElem u = mu.rational(r.b());
  const QuadExtElem b = mu.rational(mu.im());
  const QuadExtElem alpha = mu.rational(mu.alpha());
  const QuadExtElem sqrt_alpha = QuadExtElem::standard(p, 0, 1);

  const QuadMat pm{{u, u, mu - t, mu_bar - t}};
  const QuadMat qm{{b * alpha, b * alpha, b * sqrt_alpha, -(b * sqrt_alpha)}};
  if (pm.det().is_zero() || qm.det().is_zero()) return std::nullopt;

  const QuadMat tm = pm * qm.inverse();
  if (!std::all_of(tm.e.begin(), tm.e.end(), [](const QuadExtElem& x) { return x.is_rational(); })) {
    throw LemmaViolation("ab-subgp", "P Q^{-1} is not Galois-invariant for R = " + to_string(r));
  }
  return Mat2(p, tm.e[0].re(), tm.e[1].re(), tm.e[2].re(), tm.e[3].re());
}

// Column eigenvector of x for the rational eigenvalue lambda.
std::pair<Residue, Residue> eigenvector(const Mat2& x, Residue lambda) {
  const std::int64_t p = x.modulus();
  if (x.b() != 0 || x.a() != lambda) return {x.b(), reduce(lambda - x.a(), p)};
  return {reduce(x.d() - lambda, p), reduce(-x.c(), p)};
}

bool all_conjugates_in(const Subgroup& h, const Mat2& t, NamedGroupId id) {
  const Mat2 t_inv = mat_inv(t);
  return std::all_of(h.elements().begin(), h.elements().end(),
                     [&](const Mat2& x) { return is_member(id, h.n(), t_inv * x * t); });
}

}  // namespace

// ---------------------------------------------------------------------------

Mat2 SL2Word::evaluate() const {
  Mat2 result = Mat2::identity(ell);
  for (const auto& f : letters) {
    const Mat2 base = f.letter == SL2Letter::U ? Mat2::upper_unipotent(ell) : Mat2::lower_unipotent(ell);
    result = result * mat_pow(base, f.exponent);
  }
  return result;
}

SL2Word decompose_sl2(const Mat2& x) {
  const std::int64_t p = x.modulus();
  require_odd_prime(p, "decompose_sl2");
  if (x.det() != 1) throw PreconditionError("decompose_sl2: det " + std::to_string(x.det()) + " != 1");

  WordBuilder w(p);
  if (x.a() != 0) {
    // x = (U^t)^{c/a} U^{ab} diag(a, a^{-1})
    const Residue a_inv = *inv_mod(x.a(), p);
    w.push(SL2Letter::Ut, mul_mod(x.c(), a_inv, p))
        .push(SL2Letter::U, mul_mod(x.a(), x.b(), p))
        .push_diagonal(x.a());
  } else {
    // x = U^{a/c} (U^t)^{-cd} (0 -c^{-1}; c 0)
    const Residue c_inv = *inv_mod(x.c(), p);
    w.push(SL2Letter::U, mul_mod(x.a(), c_inv, p))
        .push(SL2Letter::Ut, -mul_mod(x.c(), x.d(), p))
        .push_antidiagonal(x.c());
  }
  return std::move(w).build();
}

const char* to_string(CartanTarget target) {
  switch (target) {
    case CartanTarget::Split: return "Split";
    case CartanTarget::Nonsplit: return "Nonsplit";
    case CartanTarget::NormSplit: return "NormSplit";
    case CartanTarget::NormNonsplit: return "NormNonsplit";
  }
  return "?";
}

NamedGroupId named_group_of(CartanTarget target) {
  switch (target) {
    case CartanTarget::Split: return NamedGroupId::SplitCartan;
    case CartanTarget::Nonsplit: return NamedGroupId::NonsplitCartan;
    case CartanTarget::NormSplit: return NamedGroupId::NormSplit;
    case CartanTarget::NormNonsplit: return NamedGroupId::NormNonsplit;
  }
  return NamedGroupId::SplitCartan;
}

CartanEmbedding conjugate_into_cartan(const Subgroup& h) {
  require_field(h, "conjugate_into_cartan");
  const std::int64_t p = h.n();
  if (!h.is_abelian()) throw PreconditionError("conjugate_into_cartan: group is not abelian");
  if (divides(p, h.order())) throw PreconditionError("conjugate_into_cartan: l divides |H|");

  const auto& elems = h.elements();
  const auto irrational = std::find_if(elems.begin(), elems.end(), [](const Mat2& x) {
    return eigenvalues(x).kind == EigenKind::IrrationalConjugatePair;
  });

  if (irrational == elems.end()) {
    const auto non_scalar = std::find_if(h.generators().begin(), h.generators().end(),
                                         [](const Mat2& x) { return !x.is_scalar(); });
    const bool diagonal = std::all_of(h.generators().begin(), h.generators().end(),
                                      [](const Mat2& x) { return x.is_diagonal(); });
    if (non_scalar == h.generators().end() || diagonal) return {Mat2::identity(p), CartanTarget::Split};

    const EigenResult eig = eigenvalues(*non_scalar);
    if (eig.kind != EigenKind::RationalDistinct) {
      throw LemmaViolation("ab-subgp", "non-scalar " + to_string(*non_scalar) +
                                           " with a repeated eigenvalue in a group of order prime to l");
    }
    const auto [x1, y1] = eigenvector(*non_scalar, eig.values[0].re());
    const auto [x2, y2] = eigenvector(*non_scalar, eig.values[1].re());
    const Mat2 t(p, x1, x2, y1, y2);
    if (!t.is_invertible() || !all_conjugates_in(h, t, NamedGroupId::SplitCartan)) {
      throw LemmaViolation("ab-subgp", "eigenvectors do not diagonalize the group");
    }
    return {t, CartanTarget::Split};
  }

  // Non-split: H is cyclic; use a generator R.
  const auto gen = std::find_if(elems.begin(), elems.end(),
                                [&](const Mat2& x) { return order_in_group(x, h.order()) == h.order(); });
  if (gen == elems.end()) {
    throw LemmaViolation("ab-subgp", "abelian group with an irrational element is not cyclic");
  }
  CartanEmbedding out{Mat2::identity(p), CartanTarget::Nonsplit, false};
  if (auto t = nonsplit_conjugator(*gen)) {
    out.conjugator = *t;
  } else {
    auto found = search_cartan_conjugator(h, CartanTarget::Nonsplit);
    if (!found) throw LemmaViolation("ab-subgp", "no conjugator into C_ns exists");
    out.conjugator = *found;
    out.used_search_fallback = true;
  }
  if (!all_conjugates_in(h, out.conjugator, NamedGroupId::NonsplitCartan)) {
    throw LemmaViolation("ab-subgp", "T^{-1} H T is not inside C_ns");
  }
  return out;
}

std::optional<Mat2> search_cartan_conjugator(const Subgroup& h, CartanTarget target) {
  require_field(h, "search_cartan_conjugator");
  const NamedGroupId id = named_group_of(target);
  for (const Mat2& t : gl2_elements(h.n())) {
    const Mat2 t_inv = mat_inv(t);
    const bool ok = std::all_of(h.generators().begin(), h.generators().end(),
                                [&](const Mat2& g) { return is_member(id, h.n(), t_inv * g * t); });
    if (ok) return t;
  }
  return std::nullopt;
}

Mat2 cyclic_generator(const Subgroup& h) {
  require_field(h, "cyclic_generator");
  for (const Mat2& x : h.elements()) {
    if (x.det() != 1) throw PreconditionError("cyclic_generator: group is not inside SL_2");
  }
  if (h.order() % 2 == 0) throw PreconditionError("cyclic_generator: |H| is even");
  if (divides(h.n(), h.order())) throw PreconditionError("cyclic_generator: l divides |H|");

  for (const Mat2& g : h.generators()) {
    if (order_in_group(g, h.order()) == h.order()) return g;
  }
  for (const Mat2& x : h.elements()) {
    if (order_in_group(x, h.order()) == h.order()) return x;
  }
  throw LemmaViolation("cyclic", "subgroup of order " + std::to_string(h.order()) +
                                     " of SL_2(F_" + std::to_string(h.n()) + ") is not cyclic");
}

Subgroup normalizer_in_gl2(const Subgroup& h, ScanOptions options) {
  require_field(h, "normalizer_in_gl2");
  if (h.n() > options.max_ell) {
    throw ResourceError("normalizer scan over GL_2(F_" + std::to_string(h.n()) +
                        ") exceeds the cap l <= " + std::to_string(options.max_ell));
  }
  std::vector<Mat2> out;
  for (const Mat2& x : gl2_elements(h.n())) {
    const Mat2 x_inv = mat_inv(x);
    const bool normalizes = std::all_of(h.generators().begin(), h.generators().end(),
                                        [&](const Mat2& g) { return h.contains(x * g * x_inv); });
    if (normalizes) out.push_back(x);
  }
  return Subgroup::from_elements(h.modulus(), std::move(out));
}

CartanEmbedding conjugate_into_normalizer(const Subgroup& h) {
  require_field(h, "conjugate_into_normalizer");
  const std::int64_t p = h.n();
  const Subgroup h0 = sl_part(h);
  const Mat2 minus_one = Mat2::scalar(p, -1);
  const bool h0_in_pm = std::all_of(h0.elements().begin(), h0.elements().end(), [&](const Mat2& x) {
    return x.is_identity() || x == minus_one;
  });

  CartanEmbedding inner{Mat2::identity(p), CartanTarget::Split, false};
  if (h0_in_pm) {
    // H / H° embeds in F_l^x and H° is central, so H is abelian.
    if (!h.is_abelian()) throw LemmaViolation("ns-nns", "H° ⊆ {±I} but H is not abelian");
    inner = conjugate_into_cartan(h);
  } else if (h.is_abelian() && !divides(p, h.order())) {
    inner = conjugate_into_cartan(h);
  } else {
    if (h0.order() % 2 == 0) throw PreconditionError("conjugate_into_normalizer: |H°| is even");
    if (divides(p, h0.order())) throw PreconditionError("conjugate_into_normalizer: l divides |H°|");
    if (!h0.is_abelian()) throw LemmaViolation("cyclic", "H° of odd order prime to l is not abelian");
    inner = conjugate_into_cartan(h0);
  }

  const CartanTarget target =
      inner.target == CartanTarget::Split ? CartanTarget::NormSplit : CartanTarget::NormNonsplit;
  if (!all_conjugates_in(h, inner.conjugator, named_group_of(target))) {
    throw LemmaViolation("normalizers", std::string("T^{-1} H T is not inside ") + to_string(target));
  }
  return {inner.conjugator, target, inner.used_search_fallback};
}

}  // namespace gl2kit
