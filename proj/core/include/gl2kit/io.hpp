#pragma once

/**
 * @file io.hpp
 * @brief JSON input schemas and report serialization.
 *
 * Subgroup input:
 *   {"modulus": N, "generators": [[[a, b], [c, d]], ...],
 *    "witness": [c, d],                                   (optional)
 *    "hypotheses": {"det_surjective": true, "odd_degree_point_exists": true,
 *                   "inertia_exponent": 1, "witness": [c, d]}}   (optional)
 *
 * Field input:
 *   {"label": "...", "merel_constant": M, "lv14_bound": N_K, "pdi2_primes": [...]}
 */

#include <array>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "gl2kit/bounds.hpp"
#include "gl2kit/classify.hpp"
#include "gl2kit/groups.hpp"
#include "gl2kit/harness.hpp"
#include "gl2kit/lemmas.hpp"
#include "gl2kit/stabilizers.hpp"

namespace gl2kit {

using Json = nlohmann::json;

struct SubgroupInput {
  Subgroup group;
  std::optional<std::array<Residue, 2>> witness;
  std::optional<BlHypotheses> hypotheses;
};

/// Throws InputError on schema violations.
SubgroupInput parse_subgroup_input(const Json& doc);
FieldInput parse_field_input(const Json& doc);

/// Reads and parses a JSON file; InputError when unreadable or malformed.
Json read_json_file(const std::string& path);

Json to_json(const Mat2& x);
Json to_json(const SL2Word& w);
Json to_json(const DegreeSpectrum& s);
Json to_json(const ClassifyVerdict& v);
Json to_json(const NotBlReport& r);
Json to_json(const BlVerdict& v);
Json to_json(const BoundReport& r);
Json to_json(const SmallPrimeReport& r);
Json to_json(const PreservationReport& r);
Json to_json(const HarnessReport& r);

}  // namespace gl2kit
