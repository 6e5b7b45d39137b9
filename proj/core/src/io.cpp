#include "gl2kit/io.hpp"

#include <fstream>

#include "gl2kit/errors.hpp"

namespace gl2kit {

namespace {

const Json& field(const Json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) throw InputError(std::string("missing field '") + name + "'");
  return doc.at(name);
}

std::int64_t as_int(const Json& v, const char* what) {
  if (!v.is_number_integer()) throw InputError(std::string(what) + " must be an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_positive(const Json& v, const char* what) {
  const std::int64_t x = as_int(v, what);
  if (x < 1) throw InputError(std::string(what) + " must be positive");
  return static_cast<std::uint64_t>(x);
}

std::array<Residue, 2> as_vector(const Json& v, const char* what) {
  if (!v.is_array() || v.size() != 2) throw InputError(std::string(what) + " must be a pair [c, d]");
  return {as_int(v[0], what), as_int(v[1], what)};
}

Mat2 as_matrix(std::int64_t n, const Json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_array() || v[0].size() != 2 || !v[1].is_array() ||
      v[1].size() != 2) {
    throw InputError("generator must be [[a, b], [c, d]]");
  }
  return {n, as_int(v[0][0], "entry"), as_int(v[0][1], "entry"), as_int(v[1][0], "entry"),
          as_int(v[1][1], "entry")};
}

BlHypotheses as_hypotheses(const Json& v) {
  if (!v.is_object()) throw InputError("hypotheses must be an object");
  BlHypotheses h;
  h.det_surjective = v.value("det_surjective", false);
  h.odd_degree_point_exists = v.value("odd_degree_point_exists", false);
  if (v.contains("inertia_exponent")) h.inertia_exponent = static_cast<int>(as_int(v["inertia_exponent"], "inertia_exponent"));
  if (v.contains("witness")) h.witness = as_vector(v["witness"], "hypotheses.witness");
  return h;
}

Json spectrum_rows(const DegreeSpectrum& s) {
  Json rows = Json::array();
  for (const SpectrumEntry& e : s.entries) {
    rows.push_back({{"c", e.c}, {"d", e.d}, {"stabilizer_order", e.stabilizer_order}, {"index", e.index}});
  }
  return rows;
}

}  // namespace

SubgroupInput parse_subgroup_input(const Json& doc) {
  const std::int64_t n = as_int(field(doc, "modulus"), "modulus");
  const Json& gens = field(doc, "generators");
  if (!gens.is_array()) throw InputError("generators must be an array");
  std::vector<Mat2> mats;
  for (const Json& g : gens) mats.push_back(as_matrix(n, g));
  SubgroupInput in{closure(Modulus(n), mats), std::nullopt, std::nullopt};
  if (doc.contains("witness")) in.witness = as_vector(doc["witness"], "witness");
  if (doc.contains("hypotheses")) in.hypotheses = as_hypotheses(doc["hypotheses"]);
  return in;
}

FieldInput parse_field_input(const Json& doc) {
  FieldInput in;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw InputError("label must be a string");
    in.label = doc["label"].get<std::string>();
  }
  in.merel_constant = as_positive(field(doc, "merel_constant"), "merel_constant");
  in.lv14_bound = as_positive(field(doc, "lv14_bound"), "lv14_bound");
  const Json& primes = field(doc, "pdi2_primes");
  if (!primes.is_array()) throw InputError("pdi2_primes must be an array");
  for (const Json& p : primes) in.pdi2_primes.push_back(as_positive(p, "pdi2_primes entry"));
  return in;
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

Json to_json(const Mat2& x) { return Json::array({Json::array({x.a(), x.b()}), Json::array({x.c(), x.d()})}); }

Json to_json(const SL2Word& w) {
  Json letters = Json::array();
  for (const SL2Factor& f : w.letters) {
    letters.push_back({{"letter", f.letter == SL2Letter::U ? "U" : "Ut"}, {"exponent", f.exponent}});
  }
  return {{"ell", w.ell}, {"length", w.letters.size()}, {"letters", letters}};
}

Json to_json(const DegreeSpectrum& s) {
  return {{"ell", s.ell},
          {"group_order", s.group_order},
          {"sl_index", s.sl_index},
          {"exhaustive", s.exhaustive},
          {"entries", spectrum_rows(s)}};
}

Json to_json(const ClassifyVerdict& v) {
  return {{"target", to_string(v.target)}, {"conjugator", to_json(v.conjugator)}};
}

Json to_json(const NotBlReport& r) {
  Json table = Json::array();
  for (const DivisibilityRow& row : r.table) {
    table.push_back({{"c", row.c}, {"d", row.d}, {"index", row.index}, {"by2", row.by2}, {"by3", row.by3}});
  }
  return {{"ell", r.ell},
          {"branch", to_string(r.branch)},
          {"inertia_exponent", r.inertia_exponent},
          {"group_order", r.group_order},
          {"table", table}};
}

Json to_json(const BlVerdict& v) {
  return {{"ell", v.ell},
          {"delta_kind", to_string(v.delta_kind)},
          {"divisor", v.divisor},
          {"congruence_ok", v.congruence_ok},
          {"mod36_class", v.mod36_class},
          {"contains_unipotent", v.contains_unipotent},
          {"inertia_shadow", v.inertia_shadow},
          {"spectrum", to_json(v.spectrum)}};
}

Json to_json(const BoundReport& r) {
  return {{"r_set", r.r_set}, {"p_k", r.p_k}, {"sieve_window", r.sieve_window}};
}

Json to_json(const SmallPrimeReport& r) {
  Json fact = Json::object();
  for (const auto& [p, e] : r.group_order_factorization) fact[std::to_string(p)] = e;
  return {{"d", r.d},
          {"p", r.p},
          {"m", r.m},
          {"modulus", r.modulus},
          {"group_order", r.group_order ? Json(*r.group_order) : Json(nullptr)},
          {"group_order_factorization", fact},
          {"gcd", r.gcd}};
}

Json to_json(const PreservationReport& r) {
  Json ledger = Json::array();
  for (const LedgerRow& row : r.ledger) {
    ledger.push_back({{"ell", row.ell},
                      {"kind", row.small ? "small" : "large"},
                      {"passes_mod36", row.passes_mod36},
                      {"divisor", row.divisor},
                      {"gcd_with_d", row.gcd_with_d}});
  }
  return {{"p_k", r.p_k},
          {"d", r.d},
          {"min_prime_divisor", r.min_prime_divisor ? Json(*r.min_prime_divisor) : Json(nullptr)},
          {"status", r.covered ? "preserved" : "not covered"},
          {"certificate", r.certificate ? to_json(*r.certificate) : Json(nullptr)},
          {"ledger", ledger}};
}

Json to_json(const HarnessReport& r) {
  Json rows = Json::array();
  for (const HarnessRow& row : r.rows) {
    rows.push_back({{"ell", row.ell},
                    {"skipped", row.skipped},
                    {"checked", row.checked},
                    {"excluded", row.excluded},
                    {"violations", row.violations},
                    {"note", row.note}});
  }
  return {{"lemma", r.lemma},
          {"rows", rows},
          {"total_checked", r.total_checked()},
          {"total_violations", r.total_violations()},
          {"messages", r.messages}};
}

}  // namespace gl2kit
