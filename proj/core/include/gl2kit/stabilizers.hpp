#pragma once

/**
 * @file stabilizers.hpp
 * @brief The right action of G <= GL_2 on row vectors: vector stabilizers
 *        G_{c d}, the determinant-one part G°, degree spectra
 *        ([G : G_{c d}] per point), and fixed-point modules over Z/NZ.
 *
 * A stabilizer here fixes the vector (c d), not just the line through it.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gl2kit/groups.hpp"
#include "gl2kit/modarith.hpp"

namespace gl2kit {

/// A point of P^1(F_l), normalized to (1, s) or (0, 1).
class ProjPoint {
 public:
  /// Normalizes a nonzero vector: (c, d) -> (1, d/c) if c != 0, else (0, 1).
  ProjPoint(std::int64_t ell, Residue c, Residue d);

  /// All l + 1 points, (0, 1) first then (1, s) for s = 0 .. l-1.
  static std::vector<ProjPoint> all(std::int64_t ell);

  std::int64_t ell() const noexcept { return ell_; }
  Residue c() const noexcept { return c_; }
  Residue d() const noexcept { return d_; }

  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
  friend auto operator<=>(const ProjPoint&, const ProjPoint&) = default;

 private:
  std::int64_t ell_;
  Residue c_;
  Residue d_;
};

/// {A in g : (c d) A = (c d)}; (c, d) must be a nonzero vector mod the group's modulus.
Subgroup vector_stabilizer(const Subgroup& g, Residue c, Residue d);
std::size_t vector_stabilizer_order(const Subgroup& g, Residue c, Residue d);

/// Stabilizer of the representative vector of p.
Subgroup stabilizer(const Subgroup& g, const ProjPoint& p);

/// g ∩ SL_2.
Subgroup sl_part(const Subgroup& g);
/// [g : g°] = |det(g)|.
std::size_t sl_index(const Subgroup& g);

/// T with T^{-1} x T = (1 beta; 0 1), for a unipotent x != I.
Mat2 unipotent_conjugator(const Mat2& x);

enum class UnipotentKind { Trivial, OrderEll };

struct UnipotentClass {
  UnipotentKind kind;
  /// For OrderEll: T with T^{-1} G°_{c d} T = <U>.
  std::optional<Mat2> conjugator;
};

/// Classifies G°_{c d}. Any outcome other than trivial or a conjugate of <U>
/// raises LemmaViolation.
UnipotentClass unipotent_class(const Subgroup& g, Residue c, Residue d);
UnipotentClass unipotent_class(const Subgroup& g, const ProjPoint& p);

struct SpectrumEntry {
  Residue c;
  Residue d;
  std::size_t stabilizer_order;
  std::size_t index;
};

/// Indices [G : G_{c d}], either at one representative per projective point or
/// (exhaustive) at every nonzero vector of F_l^2.
struct DegreeSpectrum {
  std::int64_t ell = 0;
  std::size_t group_order = 0;
  std::size_t sl_index = 0;
  bool exhaustive = false;
  std::vector<SpectrumEntry> entries;

  /// Entry for the vector (c, d); throws PreconditionError if absent.
  const SpectrumEntry& at(Residue c, Residue d) const;
};

/// Spectrum over the l + 1 normalized representatives (stabilizer scan).
DegreeSpectrum degree_spectrum(const Subgroup& g);

/// Spectrum over all l^2 - 1 nonzero vectors, computed from orbits.
DegreeSpectrum exhaustive_spectrum(const Subgroup& g);

/// Invariant factors (m, n), m | n | N, of {v in (Z/NZ)^2 : v A = v for all A in g}.
struct FixedModule {
  std::int64_t m;
  std::int64_t n;

  friend bool operator==(const FixedModule&, const FixedModule&) = default;
};

FixedModule fixed_module(const Subgroup& g);

}  // namespace gl2kit
