#pragma once

/**
 * @file classify.hpp
 * @brief Group-theoretic side of the image classification for subgroups of
 *        GL_2(F_l) that have a point of odd (or prime-to-6) degree: Borel versus
 *        Cartan normalizers, the 2-or-3 divisibility of degrees inside Cartan
 *        normalizers, and the Delta_1 / Delta_2 description of Borel images.
 *
 * Number-field conditions enter only through BlHypotheses.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "gl2kit/groups.hpp"
#include "gl2kit/modarith.hpp"
#include "gl2kit/stabilizers.hpp"

namespace gl2kit {

enum class ClassifyTarget { Borel, NormSplit, NormNonsplit };

const char* to_string(ClassifyTarget target);
NamedGroupId named_group_of(ClassifyTarget target);

struct ClassifyVerdict {
  ClassifyTarget target;
  /// T^{-1} g T lies inside the target.
  Mat2 conjugator;
};

/// Index of the stabilizer of the vector (c, d) in g.
std::size_t vector_index(const Subgroup& g, Residue c, Residue d);

/// For g with a vector of odd index: conjugates g into B, N_s or N_ns.
/// When l divides |g| the conjugator moves an order-l subgroup onto <U>.
ClassifyVerdict classify_image(const Subgroup& g, Residue c, Residue d);
ClassifyVerdict classify_image(const Subgroup& g, const ProjPoint& witness);

struct BlHypotheses {
  /// det(g) = F_l^x, standing in for Q(zeta_l) ∩ K = Q. Always re-checked.
  bool det_surjective = false;
  /// Some nonzero vector has index prime to 6.
  bool odd_degree_point_exists = false;
  /// Optional explicit vector for the above.
  std::optional<std::array<Residue, 2>> witness;
  /// Inertia exponent, one of 1, 2, 3, 4, 6.
  int inertia_exponent = 1;
};

/// Throws PreconditionError unless e is one of 1, 2, 3, 4, 6.
void validate_inertia_exponent(int e);

enum class CartanBranch { NormNonsplit, NormSplit };
const char* to_string(CartanBranch branch);

struct DivisibilityRow {
  Residue c;
  Residue d;
  std::size_t index;
  bool by2;
  bool by3;
};

struct NotBlReport {
  std::int64_t ell;
  CartanBranch branch;
  int inertia_exponent;
  std::size_t group_order;
  /// One row per nonzero vector, (c, d) ascending.
  std::vector<DivisibilityRow> table;
};

/// For g inside N_ns, or inside N_s but not C_s, containing C^e and with
/// surjective determinant: every vector index is divisible by 2 or 3.
NotBlReport not_bl_check(const Subgroup& g, const BlHypotheses& hyp);

/// 12u = 12t = 6(u + t) mod l-1 for every diagexp(u, t) in delta.
bool cong_check(const Subgroup& delta);

enum class DeltaKind { Delta1, Delta2 };
const char* to_string(DeltaKind kind);

struct BlVerdict {
  std::int64_t ell;
  DeltaKind delta_kind;
  /// (l - 1) / (2 tau).
  std::int64_t divisor;
  /// l = 3 mod 4 and l != 1 mod 9.
  bool congruence_ok;
  std::int64_t mod36_class;
  bool contains_unipotent;
  /// g has an element with eigenvalues {1, alpha^e}, the shadow of a tame
  /// inertia image. U in g is only required when this holds.
  bool inertia_shadow;
  DegreeSpectrum spectrum;
};

/// For g inside B satisfying the hypotheses: identifies the diagonal part of
/// g as Delta_1 or Delta_2 and checks the consequences for degrees and l.
BlVerdict derive_delta(const Subgroup& g, const BlHypotheses& hyp);

/// l mod 36 in {7, 11, 23, 31, 35}.
bool mod36_filter(std::int64_t ell) noexcept;

}  // namespace gl2kit
