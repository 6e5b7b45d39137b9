#pragma once

/**
 * @file groups.hpp
 * @brief Finite subgroups of GL_2(Z/NZ) held as explicit element sets, and
 *        the named subgroups of GL_2(F_l): Borel, split / non-split Cartan,
 *        their normalizers, SL_2, and the Delta_1 / Delta_2 images.
 *
 * Throughout, alpha = primitive_root(l) and diagexp(u, t) = diag(alpha^u, alpha^t).
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gl2kit/modarith.hpp"

namespace gl2kit {

struct ClosureOptions {
  /// Closure aborts with ResourceError once it holds more elements than this.
  std::size_t max_order = 10'000'000;
};

/// A finite subgroup of GL_2(Z/NZ): generators plus the full, sorted element set.
class Subgroup {
 public:
  const Modulus& modulus() const noexcept { return modulus_; }
  std::int64_t n() const noexcept { return modulus_.value(); }
  const std::vector<Mat2>& generators() const noexcept { return generators_; }
  /// Sorted ascending (lexicographic on entries).
  const std::vector<Mat2>& elements() const noexcept { return elements_; }
  std::size_t order() const noexcept { return elements_.size(); }

  bool contains(const Mat2& x) const;
  bool is_abelian() const;
  bool is_trivial() const noexcept { return elements_.size() == 1; }

  /// t^{-1} G t.
  Subgroup conjugated(const Mat2& t) const;

  /// Wraps a set already known to be a subgroup (deduplicated and sorted here).
  /// When `verify` is set the set is regenerated from a greedy generating set
  /// and must come back identical, otherwise PreconditionError.
  static Subgroup from_elements(const Modulus& m, std::vector<Mat2> elements, bool verify = true);

  friend bool operator==(const Subgroup& x, const Subgroup& y) {
    return x.modulus_ == y.modulus_ && x.elements_ == y.elements_;
  }

 private:
  Subgroup(Modulus m, std::vector<Mat2> gens, std::vector<Mat2> elems)
      : modulus_(m), generators_(std::move(gens)), elements_(std::move(elems)) {}

  friend Subgroup closure(const Modulus&, std::span<const Mat2>, ClosureOptions);

  Modulus modulus_;
  std::vector<Mat2> generators_;
  std::vector<Mat2> elements_;
};

/// Smallest subgroup containing `generators`, by breadth-first product closure.
Subgroup closure(const Modulus& modulus, std::span<const Mat2> generators,
                 ClosureOptions options = {});
inline Subgroup closure(const Modulus& modulus, const std::vector<Mat2>& generators,
                        ClosureOptions options = {}) {
  return closure(modulus, std::span<const Mat2>(generators), options);
}

bool is_subgroup_of(const Subgroup& h, const Subgroup& g);

/// Every element of GL_2(Z/nZ), sorted. Throws ResourceError beyond `max_order`.
std::vector<Mat2> gl2_elements(std::int64_t n, std::size_t max_order = 1'000'000);

/// The determinant image det(G) as a sorted list of residues.
std::vector<Residue> determinant_image(const Subgroup& g);

// ---------------------------------------------------------------------------
// diagexp and the named subgroups
// ---------------------------------------------------------------------------

/// (u, t) in (Z/(l-1))^2, standing for diag(alpha^u, alpha^t).
struct DiagExpPair {
  std::int64_t ell;
  std::int64_t u;
  std::int64_t t;

  friend bool operator==(const DiagExpPair&, const DiagExpPair&) = default;
};

Mat2 diagexp(std::int64_t ell, std::int64_t u, std::int64_t t);

/// Discrete logarithms base alpha = primitive_root(l), tabulated once.
class DiscreteLog {
 public:
  explicit DiscreteLog(std::int64_t ell);

  std::int64_t ell() const noexcept { return ell_; }
  Residue alpha() const noexcept { return alpha_; }
  /// k in [0, l-1) with alpha^k = x; x must be nonzero mod l.
  std::int64_t log(Residue x) const;
  /// Inverse of diagexp; throws PreconditionError on a non-diagonal matrix.
  DiagExpPair diag_log(const Mat2& x) const;

 private:
  std::int64_t ell_;
  Residue alpha_;
  std::vector<std::int64_t> table_;
};

enum class NamedGroupId {
  Borel,
  SplitCartan,
  NonsplitCartan,
  NormSplit,
  NormNonsplit,
  SL2,
  Delta1,
  Delta2,
  DeltaU1,
  DeltaU2,
};

const char* to_string(NamedGroupId id);
NamedGroupId named_group_from_string(const std::string& name);

/// 1 if l = 2 (mod 3), 3 if l = 1 (mod 3); l must be a prime >= 5.
int tau(std::int64_t ell);

/// Generator of F_{l^2}^x with the smallest (im, re), im >= 1.
QuadExtElem nonsplit_generator(std::int64_t ell);

/// The matrix (a  b alpha; b  a) representing a + b sqrt(alpha) in C_ns.
Mat2 nonsplit_matrix(const QuadExtElem& x);

/// Generators used to build the named subgroup by closure.
std::vector<Mat2> named_group_generators(NamedGroupId id, std::int64_t ell);

/// The named subgroup of GL_2(F_l), built by closure of its generators.
Subgroup named_group(NamedGroupId id, std::int64_t ell);

/// Membership straight from the defining description of each named subgroup.
/// Independent of closure; used for elementwise containment checks.
bool is_member(NamedGroupId id, std::int64_t ell, const Mat2& x);

/// True iff every element of g satisfies is_member(id, l, .).
bool contained_in(const Subgroup& g, NamedGroupId id);

/// {diag(d, a) : diag(a, d) in delta}; delta must consist of diagonal matrices.
Subgroup delta_flip(const Subgroup& delta);

/// {diag(a, d) : (a b; 0 d) in g}: the diagonal projection of a Borel subgroup.
Subgroup diagonal_part(const Subgroup& g);

}  // namespace gl2kit
