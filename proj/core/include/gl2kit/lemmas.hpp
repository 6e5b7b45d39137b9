#pragma once

/**
 * @file lemmas.hpp
 * @brief Constructive structure results for subgroups of GL_2(F_l). Each
 *        operation returns a witness (a word, a conjugator, a generator) that
 *        callers can check independently.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "gl2kit/groups.hpp"
#include "gl2kit/modarith.hpp"

namespace gl2kit {

enum class SL2Letter { U, Ut };

struct SL2Factor {
  SL2Letter letter;
  /// Exponent reduced into [1, l).
  std::int64_t exponent;

  friend bool operator==(const SL2Factor&, const SL2Factor&) = default;
};

/// A product of powers of U = (1 1; 0 1) and U^t = (1 0; 1 1).
struct SL2Word {
  std::int64_t ell;
  std::vector<SL2Factor> letters;

  Mat2 evaluate() const;
};

/// Writes an element of SL_2(F_l) as a word in U and U^t, at most 8 letters.
SL2Word decompose_sl2(const Mat2& x);

enum class CartanTarget { Split, Nonsplit, NormSplit, NormNonsplit };

const char* to_string(CartanTarget target);
NamedGroupId named_group_of(CartanTarget target);

/// T with T^{-1} H T inside the target subgroup.
struct CartanEmbedding {
  Mat2 conjugator;
  CartanTarget target;
  /// Set when the explicit construction was unusable and a search over
  /// GL_2(F_l) produced the conjugator instead.
  bool used_search_fallback = false;
};

/// An abelian h with l not dividing |h| is conjugate into C_s or C_ns.
/// Follows the explicit construction: simultaneous eigenvectors in the split
/// case, T = P Q^{-1} over F_{l^2} in the non-split case.
CartanEmbedding conjugate_into_cartan(const Subgroup& h);

/// Exhaustive search for T in GL_2(F_l) with T^{-1} h T inside C_s (split) or
/// C_ns. Only generators are tested.
std::optional<Mat2> search_cartan_conjugator(const Subgroup& h, CartanTarget target);

/// A generator of h, for h <= SL_2(F_l) of odd order prime to l.
Mat2 cyclic_generator(const Subgroup& h);

struct ScanOptions {
  /// Largest prime for which GL_2(F_l) scans are attempted.
  std::int64_t max_ell = 13;
};

/// {x in GL_2(F_l) : x h x^{-1} = h}, by a scan of GL_2(F_l).
Subgroup normalizer_in_gl2(const Subgroup& h, ScanOptions options = {});

/// For h with |h ∩ SL_2| odd and prime to l, h ∩ SL_2 inside {±I}, or h
/// abelian of order prime to l: a conjugator into N_s or N_ns.
CartanEmbedding conjugate_into_normalizer(const Subgroup& h);

}  // namespace gl2kit
