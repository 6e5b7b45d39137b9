#include "gl2kit/classify.hpp"

#include <algorithm>

#include "gl2kit/errors.hpp"
#include "gl2kit/lemmas.hpp"

namespace gl2kit {

namespace {

std::int64_t require_prime_at_least(const Subgroup& g, std::int64_t min_ell, const char* what) {
  if (!g.modulus().is_prime() || g.n() < min_ell) {
    throw PreconditionError(std::string(what) + ": modulus must be a prime >= " + std::to_string(min_ell));
  }
  return g.n();
}

bool all_conjugates_in(const Subgroup& g, const Mat2& t, NamedGroupId id) {
  const Mat2 t_inv = mat_inv(t);
  return std::all_of(g.elements().begin(), g.elements().end(),
                     [&](const Mat2& x) { return is_member(id, g.n(), t_inv * x * t); });
}

bool coprime_to_6(std::size_t k) { return k % 2 != 0 && k % 3 != 0; }

void require_det_surjective(const Subgroup& g, const BlHypotheses& hyp, const char* what) {
  if (!hyp.det_surjective) throw PreconditionError(std::string(what) + ": det_surjective is not asserted");
  if (determinant_image(g).size() != static_cast<std::size_t>(g.n() - 1)) {
    throw PreconditionError(std::string(what) + ": det(g) is not all of F_l^x");
  }
}

std::string vec_str(Residue c, Residue d) {
  return "(" + std::to_string(c) + " " + std::to_string(d) + ")";
}

}  // namespace

const char* to_string(ClassifyTarget target) {
  switch (target) {
    case ClassifyTarget::Borel: return "Borel";
    case ClassifyTarget::NormSplit: return "NormSplit";
    case ClassifyTarget::NormNonsplit: return "NormNonsplit";
  }
  return "?";
}

NamedGroupId named_group_of(ClassifyTarget target) {
  switch (target) {
    case ClassifyTarget::Borel: return NamedGroupId::Borel;
    case ClassifyTarget::NormSplit: return NamedGroupId::NormSplit;
    case ClassifyTarget::NormNonsplit: return NamedGroupId::NormNonsplit;
  }
  return NamedGroupId::Borel;
}

std::size_t vector_index(const Subgroup& g, Residue c, Residue d) {
  return g.order() / vector_stabilizer_order(g, c, d);
}

ClassifyVerdict classify_image(const Subgroup& g, Residue c, Residue d) {
  const std::int64_t p = require_prime_at_least(g, 5, "classify_image");
  const std::size_t index = vector_index(g, c, d);
  if (index % 2 == 0) {
    throw PreconditionError("classify_image: witness " + vec_str(c, d) + " has even index " +
                            std::to_string(index));
  }

  if (g.order() % static_cast<std::size_t>(p) == 0) {
    const auto x = std::find_if(g.elements().begin(), g.elements().end(), [p](const Mat2& y) {
      return !y.is_identity() && mat_pow(y, p).is_identity();
    });
    if (x == g.elements().end()) throw LemmaViolation("classify", "no element of order l although l | |G|");
    const Mat2 t = unipotent_conjugator(*x);
    if (!all_conjugates_in(g, t, NamedGroupId::Borel)) {
      throw LemmaViolation("classify", "l | |G| but G is not conjugate into B along its l-subgroup");
    }
    return {ClassifyTarget::Borel, t};
  }

  CartanEmbedding e{Mat2::identity(p), CartanTarget::NormSplit, false};
  try {
    e = conjugate_into_normalizer(g);
  } catch (const PreconditionError& err) {
    // An odd-index vector forces -I outside G, so |G°| is odd.
    throw LemmaViolation("classify", std::string("normalizer step rejected the group: ") + err.what());
  }
  const ClassifyTarget target =
      e.target == CartanTarget::NormSplit ? ClassifyTarget::NormSplit : ClassifyTarget::NormNonsplit;
  if (!all_conjugates_in(g, e.conjugator, named_group_of(target))) {
    throw LemmaViolation("classify", std::string("conjugated group is not inside ") + to_string(target));
  }
  return {target, e.conjugator};
}

ClassifyVerdict classify_image(const Subgroup& g, const ProjPoint& witness) {
  if (g.n() != witness.ell()) throw PreconditionError("classify_image: modulus mismatch");
  return classify_image(g, witness.c(), witness.d());
}

void validate_inertia_exponent(int e) {
  if (e != 1 && e != 2 && e != 3 && e != 4 && e != 6) {
    throw PreconditionError("inertia exponent must be one of 1, 2, 3, 4, 6; got " + std::to_string(e));
  }
}

const char* to_string(CartanBranch branch) {
  return branch == CartanBranch::NormNonsplit ? "NormNonsplit" : "NormSplit";
}

NotBlReport not_bl_check(const Subgroup& g, const BlHypotheses& hyp) {
  const std::int64_t p = require_prime_at_least(g, 5, "not_bl_check");
  const int e = hyp.inertia_exponent;
  validate_inertia_exponent(e);
  require_det_surjective(g, hyp, "not_bl_check");

  const Mat2 gamma_e = mat_pow(nonsplit_matrix(nonsplit_generator(p)), e);
  const Residue alpha_e = pow_mod(primitive_root(p), static_cast<std::uint64_t>(e), p);
  CartanBranch branch;
  if (contained_in(g, NamedGroupId::NormNonsplit) && g.contains(gamma_e)) {
    branch = CartanBranch::NormNonsplit;
  } else if (contained_in(g, NamedGroupId::NormSplit) && !contained_in(g, NamedGroupId::SplitCartan) &&
             g.contains(Mat2::diag(p, alpha_e, 1)) && g.contains(Mat2::diag(p, 1, alpha_e))) {
    branch = CartanBranch::NormSplit;
  } else {
    throw PreconditionError("not_bl_check: g is neither inside N_ns containing C_ns^" + std::to_string(e) +
                            " nor inside N_s \\ C_s containing C_s^" + std::to_string(e));
  }

  NotBlReport report{p, branch, e, g.order(), {}};
  for (const SpectrumEntry& s : exhaustive_spectrum(g).entries) {
    report.table.push_back({s.c, s.d, s.index, s.index % 2 == 0, s.index % 3 == 0});
  }
  for (const DivisibilityRow& row : report.table) {
    if (!row.by2 && !row.by3) {
      throw LemmaViolation("not-bl", "vector " + vec_str(row.c, row.d) + " has index " +
                                         std::to_string(row.index) + ", prime to 6 (l = " +
                                         std::to_string(p) + ", e = " + std::to_string(e) + ", " +
                                         to_string(branch) + ", |G| = " + std::to_string(g.order()) + ")");
    }
  }
  return report;
}

bool cong_check(const Subgroup& delta) {
  const std::int64_t p = require_prime_at_least(delta, 3, "cong_check");
  if (!contained_in(delta, NamedGroupId::SplitCartan)) {
    throw PreconditionError("cong_check: delta has a non-diagonal element");
  }
  const DiscreteLog dlog(p);
  const std::int64_t n = p - 1;
  return std::all_of(delta.elements().begin(), delta.elements().end(), [&](const Mat2& x) {
    const DiagExpPair ut = dlog.diag_log(x);
    const std::int64_t a = reduce(12 * ut.u, n);
    return a == reduce(12 * ut.t, n) && a == reduce(6 * (ut.u + ut.t), n);
  });
}

const char* to_string(DeltaKind kind) { return kind == DeltaKind::Delta1 ? "Delta1" : "Delta2"; }

BlVerdict derive_delta(const Subgroup& g, const BlHypotheses& hyp) {
  const std::int64_t p = require_prime_at_least(g, 11, "derive_delta");
  validate_inertia_exponent(hyp.inertia_exponent);
  if (!contained_in(g, NamedGroupId::Borel)) throw PreconditionError("derive_delta: g is not inside B");
  require_det_surjective(g, hyp, "derive_delta");

  DegreeSpectrum spectrum = exhaustive_spectrum(g);
  if (!hyp.odd_degree_point_exists) {
    throw PreconditionError("derive_delta: odd_degree_point_exists is not asserted");
  }
  if (hyp.witness) {
    const auto [c, d] = *hyp.witness;
    const std::size_t index = spectrum.at(c, d).index;
    if (!coprime_to_6(index)) {
      throw PreconditionError("derive_delta: witness " + vec_str(c, d) + " has index " +
                              std::to_string(index) + ", not prime to 6");
    }
  } else if (std::none_of(spectrum.entries.begin(), spectrum.entries.end(),
                          [](const SpectrumEntry& s) { return coprime_to_6(s.index); })) {
    throw PreconditionError("derive_delta: no vector has index prime to 6");
  }

  const Subgroup delta = diagonal_part(g);
  if (!cong_check(delta)) throw PreconditionError("derive_delta: diagonal part violates 12u = 12t = 6(u+t)");

  BlVerdict v{p, DeltaKind::Delta1, 0, false, 0, false, false, std::move(spectrum)};
  if (delta == named_group(NamedGroupId::Delta1, p)) {
    v.delta_kind = DeltaKind::Delta1;
  } else if (delta == named_group(NamedGroupId::Delta2, p)) {
    v.delta_kind = DeltaKind::Delta2;
  } else {
    throw LemmaViolation("bl", "diagonal part of order " + std::to_string(delta.order()) +
                                   " is neither Delta_1 nor Delta_2");
  }

  v.divisor = (p - 1) / (2 * tau(p));
  for (const SpectrumEntry& s : v.spectrum.entries) {
    if (s.index % static_cast<std::size_t>(v.divisor) != 0) {
      throw LemmaViolation("bl", "index " + std::to_string(s.index) + " at " + vec_str(s.c, s.d) +
                                     " is not divisible by " + std::to_string(v.divisor));
    }
  }

  v.congruence_ok = p % 4 == 3 && p % 9 != 1;
  v.mod36_class = p % 36;
  if (!v.congruence_ok) throw LemmaViolation("bl", "l = " + std::to_string(p) + " fails l = 3 mod 4, l != 1 mod 9");
  if (!mod36_filter(p)) throw LemmaViolation("bl", "l mod 36 = " + std::to_string(v.mod36_class) + " outside the list");

  const Residue alpha_e = pow_mod(primitive_root(p), static_cast<std::uint64_t>(hyp.inertia_exponent), p);
  v.contains_unipotent = g.contains(Mat2::upper_unipotent(p));
  v.inertia_shadow = std::any_of(g.elements().begin(), g.elements().end(), [&](const Mat2& x) {
    return (x.a() == 1 && x.d() == alpha_e) || (x.a() == alpha_e && x.d() == 1);
  });
  if (v.inertia_shadow && !v.contains_unipotent) {
    throw LemmaViolation("bl", "inertia shadow present but U is not in g");
  }
  return v;
}

bool mod36_filter(std::int64_t ell) noexcept {
  const std::int64_t r = reduce(ell, 36);
  return r == 7 || r == 11 || r == 23 || r == 31 || r == 35;
}

}  // namespace gl2kit
