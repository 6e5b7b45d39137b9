#pragma once

/**
 * @file harness.hpp
 * @brief Falsification scans: each lemma is run over every subgroup in a
 *        finite family and every reported violation is collected.
 */

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gl2kit/groups.hpp"

namespace gl2kit {

/// One representative generator per cyclic subgroup of the given set, which
/// must be closed under powers. Identity excluded.
std::vector<Mat2> cyclic_subgroup_generators(const std::vector<Mat2>& elements);

/// Every subgroup generated by at most two elements of GL_2(F_l), up to
/// conjugacy: the first generator runs over conjugacy class representatives.
/// Deduplicated by element set; includes the trivial group.
std::vector<Subgroup> two_generated_subgroups_up_to_conjugacy(std::int64_t ell);

/// Every subgroup generated by at most two elements of the given subgroup.
std::vector<Subgroup> two_generated_subgroups(const Subgroup& ambient);

/// All subgroups H with base <= H <= ambient: joins with one more element,
/// iterated until no new subgroup appears.
std::vector<Subgroup> intermediate_subgroups(const Subgroup& base, const Subgroup& ambient);

struct HarnessOptions {
  std::int64_t ell_min = 2;
  std::int64_t ell_max = 13;
  /// Random instances per prime, where a harness samples.
  std::size_t samples = 500;
  std::uint64_t seed = 20240229;
};

struct HarnessRow {
  std::int64_t ell;
  bool skipped = false;
  std::size_t checked = 0;
  /// Candidates outside the lemma's hypotheses.
  std::size_t excluded = 0;
  std::size_t violations = 0;
  std::string note;
};

struct HarnessReport {
  std::string lemma;
  std::vector<HarnessRow> rows;
  /// Up to the first 20 violation messages.
  std::vector<std::string> messages;

  std::size_t total_checked() const;
  std::size_t total_violations() const;
};

/// sl, ab-subgp, cyclic, normalizers, ns-nns, easy-d, classify, not-bl, bl, l-part.
const std::vector<std::string>& harness_ids();

/// Runs one harness over the primes in [ell_min, ell_max] that the harness
/// accepts (odd primes, or l >= 5 / l >= 11 where the statement needs it; l = 2
/// only for l-part). Primes beyond a harness's scan cap are reported as skipped.
HarnessReport run_harness(const std::string& id, const HarnessOptions& options);

}  // namespace gl2kit
