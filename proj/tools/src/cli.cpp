#include "gl2kit_cli/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "gl2kit/bounds.hpp"
#include "gl2kit/classify.hpp"
#include "gl2kit/errors.hpp"
#include "gl2kit/harness.hpp"
#include "gl2kit/io.hpp"
#include "gl2kit/lemmas.hpp"
#include "gl2kit/modarith.hpp"
#include "gl2kit/stabilizers.hpp"

namespace gl2kit::cli {

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// A report in all three renderings: the JSON document, a key/value summary
/// and an optional table. Text prints summary then table; CSV prints the table,
/// or the summary as a key,value table when there is none.
struct Report {
  Json doc = Json::object();
  std::vector<std::pair<std::string, std::string>> summary;
  Table table;
  int exit_code = kOk;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string str(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

template <typename T>
std::string str(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else {
    std::ostringstream os;
    os << v;
    return os.str();
  }
}

std::string joined(const Json& arr) {
  std::string out;
  for (const Json& v : arr) out += (out.empty() ? "" : " ") + str(v);
  return out;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

void render(const Report& r, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << r.doc.dump(2) << '\n';
    return;
  }
  if (format == "csv") {
    Table t = r.table;
    if (t.header.empty()) {
      t.header = {"key", "value"};
      for (const auto& [k, v] : r.summary) t.rows.push_back({k, v});
    }
    const auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
      out << '\n';
    };
    line(t.header);
    for (const auto& row : t.rows) line(row);
    return;
  }
  for (const auto& [k, v] : r.summary) out << k << ": " << v << '\n';
  if (r.table.header.empty()) return;
  std::vector<std::size_t> width(r.table.header.size());
  for (std::size_t i = 0; i < width.size(); ++i) width[i] = r.table.header[i].size();
  for (const auto& row : r.table.rows) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "  " : "");
      if (i + 1 == cells.size()) {
        out << cells[i];
      } else {
        out << std::left << std::setw(static_cast<int>(width[i])) << cells[i];
      }
    }
    out << '\n';
  };
  if (!r.summary.empty()) out << '\n';
  line(r.table.header);
  for (const auto& row : r.table.rows) line(row);
}

Table spectrum_table(const DegreeSpectrum& s) {
  Table t{{"c", "d", "stabilizer_order", "index"}, {}};
  for (const auto& e : s.entries) t.rows.push_back({str(e.c), str(e.d), str(e.stabilizer_order), str(e.index)});
  return t;
}

// ---- verbs ------------------------------------------------------------------

Report do_verify(const std::string& id, const HarnessOptions& opt) {
  const auto& ids = harness_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw UsageError("unknown lemma id '" + id + "'");
  const HarnessReport h = run_harness(id, opt);
  Report r;
  r.doc = to_json(h);
  r.summary = {{"lemma", id},
               {"checked", str(h.total_checked())},
               {"violations", str(h.total_violations())}};
  for (const std::string& m : h.messages) r.summary.push_back({"violation", m});
  r.table.header = {"ell", "skipped", "checked", "excluded", "violations", "note"};
  for (const HarnessRow& row : h.rows) {
    r.table.rows.push_back({str(row.ell), str(row.skipped), str(row.checked), str(row.excluded),
                            str(row.violations), row.note});
  }
  r.exit_code = h.total_violations() == 0 ? kOk : kViolation;
  return r;
}

Report do_classify(const std::string& path) {
  const SubgroupInput in = parse_subgroup_input(read_json_file(path));
  const Subgroup& g = in.group;
  Report r;
  r.doc["modulus"] = g.n();
  r.doc["group_order"] = g.order();
  r.summary = {{"modulus", str(g.n())}, {"group_order", str(g.order())}};

  std::optional<std::array<Residue, 2>> witness = in.witness;
  if (!witness && g.modulus().is_prime() && g.n() >= 5) {
    for (const ProjPoint& pt : ProjPoint::all(g.n())) {
      if (vector_index(g, pt.c(), pt.d()) % 2 == 1) {
        witness = std::array<Residue, 2>{pt.c(), pt.d()};
        break;
      }
    }
  }
  if (!witness && !in.hypotheses) throw PreconditionError("classify: no vector of odd index and no hypotheses");

  if (witness) {
    const ClassifyVerdict v = classify_image(g, (*witness)[0], (*witness)[1]);
    r.doc["classify"] = to_json(v);
    r.doc["classify"]["witness"] = *witness;
    r.summary.push_back({"witness", str(Json(*witness))});
    r.summary.push_back({"target", to_string(v.target)});
    r.summary.push_back({"conjugator", str(to_json(v.conjugator))});
  }
  if (in.hypotheses) {
    if (contained_in(g, NamedGroupId::Borel)) {
      const BlVerdict v = derive_delta(g, *in.hypotheses);
      r.doc["bl"] = to_json(v);
      r.summary.push_back({"delta_kind", to_string(v.delta_kind)});
      r.summary.push_back({"divisor", str(v.divisor)});
      r.summary.push_back({"congruence_ok", str(v.congruence_ok)});
      r.summary.push_back({"mod36_class", str(v.mod36_class)});
      r.summary.push_back({"contains_unipotent", str(v.contains_unipotent)});
      r.table = spectrum_table(v.spectrum);
    } else {
      const NotBlReport rep = not_bl_check(g, *in.hypotheses);
      r.doc["not_bl"] = to_json(rep);
      r.summary.push_back({"branch", to_string(rep.branch)});
      r.summary.push_back({"all_divisible_by_2_or_3", "true"});
      r.table.header = {"c", "d", "index", "by2", "by3"};
      for (const auto& row : rep.table) {
        r.table.rows.push_back({str(row.c), str(row.d), str(row.index), str(row.by2), str(row.by3)});
      }
    }
  }
  return r;
}

Report do_spectrum(const std::string& path, bool exhaustive) {
  const SubgroupInput in = parse_subgroup_input(read_json_file(path));
  const DegreeSpectrum s = exhaustive ? exhaustive_spectrum(in.group) : degree_spectrum(in.group);
  Report r;
  r.doc = to_json(s);
  r.summary = {{"ell", str(s.ell)},
               {"group_order", str(s.group_order)},
               {"sl_index", str(s.sl_index)},
               {"exhaustive", str(s.exhaustive)}};
  r.table = spectrum_table(s);
  return r;
}

Report do_sieve(std::uint64_t max) {
  const auto primes = congruence_sieve(max);
  Report r;
  r.doc = {{"max", max}, {"primes", primes}};
  r.summary = {{"max", str(max)}, {"count", str(primes.size())}, {"primes", joined(Json(primes))}};
  r.table.header = {"ell", "mod36"};
  for (const auto p : primes) r.table.rows.push_back({str(p), str(p % 36)});
  return r;
}

Report do_bound(const std::string& path, std::optional<std::uint64_t> degree, std::uint64_t window) {
  const FieldInput in = parse_field_input(read_json_file(path));
  const BoundReport b = bound_report(in, window);
  Report r;
  r.doc = to_json(b);
  r.doc["label"] = in.label;
  r.summary = {{"label", in.label},
               {"r_set", joined(Json(b.r_set))},
               {"p_k", str(b.p_k)},
               {"sieve_window", joined(Json(b.sieve_window))}};
  if (degree) {
    const PreservationReport p = torsion_preservation_report(in, *degree);
    r.doc["preservation"] = to_json(p);
    r.summary.push_back({"degree", str(*degree)});
    r.summary.push_back({"status", p.covered ? "preserved" : "not covered"});
    if (p.certificate) r.summary.push_back({"certificate_modulus", str(p.certificate->modulus)});
    r.table.header = {"ell", "kind", "passes_mod36", "divisor", "gcd_with_d"};
    for (const LedgerRow& row : p.ledger) {
      r.table.rows.push_back({str(row.ell), row.small ? "small" : "large", str(row.passes_mod36), str(row.divisor),
                              str(row.gcd_with_d)});
    }
  }
  return r;
}

Report do_order(std::uint64_t modulus) {
  const std::uint64_t order = gl2_order(modulus);
  Report r;
  r.doc = {{"modulus", modulus}, {"order", order}};
  r.summary = {{"modulus", str(modulus)}, {"order", str(order)}};
  return r;
}

Mat2 parse_matrix(std::int64_t ell, const std::string& text) {
  std::vector<Residue> entries;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      entries.push_back(std::stoll(item, &used));
      if (item.find_first_not_of(' ', used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--matrix expects four integers \"a,b,c,d\"");
    }
  }
  if (entries.size() != 4) throw UsageError("--matrix expects four integers \"a,b,c,d\"");
  return {ell, entries[0], entries[1], entries[2], entries[3]};
}

Report do_decompose(std::int64_t ell, const std::string& matrix) {
  const Mat2 x = parse_matrix(ell, matrix);
  const SL2Word w = decompose_sl2(x);
  Report r;
  r.doc = to_json(w);
  r.doc["matrix"] = to_json(x);
  std::string word;
  for (const auto& f : w.letters) {
    word += (word.empty() ? "" : " ") + std::string(f.letter == SL2Letter::U ? "U" : "Ut") + "^" + str(f.exponent);
  }
  r.summary = {{"ell", str(ell)}, {"matrix", str(to_json(x))}, {"length", str(w.letters.size())}, {"word", word}};
  r.table.header = {"position", "letter", "exponent"};
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    r.table.rows.push_back({str(i), w.letters[i].letter == SL2Letter::U ? "U" : "Ut", str(w.letters[i].exponent)});
  }
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-group toolkit for subgroups of GL_2(Z/NZ)", "gl2kit"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));

  std::string lemma;
  HarnessOptions hopt;
  auto* verify = app.add_subcommand("verify", "Run the falsification harness for one lemma");
  verify->add_option("lemma", lemma, "Lemma id")->required();
  verify->add_option("--ell-max", hopt.ell_max, "Largest prime scanned")->required()->check(CLI::PositiveNumber);
  verify->add_option("--ell-min", hopt.ell_min, "Smallest prime scanned");
  verify->add_option("--samples", hopt.samples, "Random instances per prime");
  verify->add_option("--seed", hopt.seed, "Random seed");

  std::string input;
  auto* classify = app.add_subcommand("classify", "Classify a subgroup with an odd-degree point");
  classify->add_option("--input", input, "Subgroup JSON file")->required();

  bool exhaustive = false;
  auto* spectrum = app.add_subcommand("spectrum", "Print the degree spectrum of a subgroup");
  spectrum->add_option("--input", input, "Subgroup JSON file")->required();
  spectrum->add_flag("--exhaustive", exhaustive, "Every nonzero vector instead of one per point");

  std::uint64_t max = 0;
  auto* sieve = app.add_subcommand("sieve", "Primes l <= N with l mod 36 in {7, 11, 23, 31, 35}");
  sieve->add_option("--max", max, "Upper limit")->required();

  std::optional<std::uint64_t> degree;
  std::uint64_t window = 100;
  auto* bound = app.add_subcommand("bound", "Compute R(K), p_K and the sieve window for a field input");
  bound->add_option("--input", input, "Field JSON file")->required();
  bound->add_option("--degree", degree, "Extension degree d for the preservation ledger");
  bound->add_option("--window", window, "Sieve window upper limit");

  std::uint64_t modulus = 0;
  auto* order = app.add_subcommand("order", "Print |GL_2(Z/NZ)|");
  order->add_option("--modulus", modulus, "N")->required()->check(CLI::PositiveNumber);

  std::int64_t ell = 0;
  std::string matrix;
  auto* decompose = app.add_subcommand("decompose", "Write an SL_2(F_l) element as a word in U and U^t");
  decompose->add_option("--ell", ell, "Prime modulus")->required();
  decompose->add_option("--matrix", matrix, "Entries \"a,b,c,d\" (row-major)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Report r;
    if (*verify) r = do_verify(lemma, hopt);
    else if (*classify) r = do_classify(input);
    else if (*spectrum) r = do_spectrum(input, exhaustive);
    else if (*sieve) r = do_sieve(max);
    else if (*bound) r = do_bound(input, degree, window);
    else if (*order) r = do_order(modulus);
    else r = do_decompose(ell, matrix);
    render(r, format, out);
    return r.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kUsage;
  } catch (const LemmaViolation& e) {
    err << "lemma violation: " << e.what() << '\n';
    return kViolation;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << '\n';
    return kPrecondition;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kPrecondition;
  }
}

}  // namespace gl2kit::cli
