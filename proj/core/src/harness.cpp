#include "gl2kit/harness.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "gl2kit/bounds.hpp"
#include "gl2kit/classify.hpp"
#include "gl2kit/errors.hpp"
#include "gl2kit/lemmas.hpp"
#include "gl2kit/stabilizers.hpp"

namespace gl2kit {

namespace {

using Key = std::vector<std::uint64_t>;

Key key_of(const Subgroup& g) {
  Key k;
  k.reserve(g.order());
  for (const Mat2& x : g.elements()) k.push_back(x.index());
  return k;
}

class SubgroupCollector {
 public:
  bool add(Subgroup g) {
    if (!keys_.insert(key_of(g)).second) return false;
    groups_.push_back(std::move(g));
    return true;
  }
  std::vector<Subgroup> take() && { return std::move(groups_); }

 private:
  std::set<Key> keys_;
  std::vector<Subgroup> groups_;
};

std::vector<Mat2> powers(const Mat2& x) {
  std::vector<Mat2> out{Mat2::identity(x.modulus())};
  for (Mat2 y = x; !y.is_identity(); y = y * x) out.push_back(y);
  return out;
}

}  // namespace

std::vector<Mat2> cyclic_subgroup_generators(const std::vector<Mat2>& elements) {
  std::unordered_set<std::uint64_t> seen;
  std::vector<Mat2> out;
  for (const Mat2& x : elements) {
    if (x.is_identity() || seen.count(x.index()) != 0) continue;
    const auto pw = powers(x);
    for (std::size_t k = 1; k < pw.size(); ++k) {
      if (std::gcd(k, pw.size()) == 1) seen.insert(pw[k].index());
    }
    out.push_back(x);
  }
  return out;
}

std::vector<Subgroup> two_generated_subgroups_up_to_conjugacy(std::int64_t ell) {
  require_odd_prime(ell, "two_generated_subgroups_up_to_conjugacy");
  const Modulus m(ell);
  const std::vector<Mat2> all = gl2_elements(ell);
  std::vector<Mat2> inverses;
  inverses.reserve(all.size());
  for (const Mat2& t : all) inverses.push_back(mat_inv(t));

  std::unordered_map<std::uint64_t, std::size_t> class_of;
  std::size_t classes = 0;
  for (const Mat2& x : all) {
    if (class_of.count(x.index()) != 0) continue;
    for (std::size_t i = 0; i < all.size(); ++i) class_of.emplace((inverses[i] * x * all[i]).index(), classes);
    ++classes;
  }

  // One generator per conjugacy class of cyclic subgroups.
  const std::vector<Mat2> reps = cyclic_subgroup_generators(all);
  std::vector<bool> class_used(classes, false);
  std::vector<Mat2> firsts;
  for (const Mat2& x : reps) {
    if (class_used[class_of.at(x.index())]) continue;
    const auto pw = powers(x);
    for (std::size_t k = 1; k < pw.size(); ++k) {
      if (std::gcd(k, pw.size()) == 1) class_used[class_of.at(pw[k].index())] = true;
    }
    firsts.push_back(x);
  }

  SubgroupCollector out;
  out.add(closure(m, std::vector<Mat2>{}));
  for (const Mat2& x : firsts) {
    const Subgroup cx = closure(m, {x});
    out.add(cx);
    for (const Mat2& y : reps) {
      if (!cx.contains(y)) out.add(closure(m, {x, y}));
    }
  }
  return std::move(out).take();
}

std::vector<Subgroup> two_generated_subgroups(const Subgroup& ambient) {
  const std::vector<Mat2> reps = cyclic_subgroup_generators(ambient.elements());
  SubgroupCollector out;
  out.add(closure(ambient.modulus(), std::vector<Mat2>{}));
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const Subgroup ci = closure(ambient.modulus(), {reps[i]});
    out.add(ci);
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      if (!ci.contains(reps[j])) out.add(closure(ambient.modulus(), {reps[i], reps[j]}));
    }
  }
  return std::move(out).take();
}

std::vector<Subgroup> intermediate_subgroups(const Subgroup& base, const Subgroup& ambient) {
  if (!is_subgroup_of(base, ambient)) throw PreconditionError("intermediate_subgroups: base is not inside ambient");
  std::unordered_set<std::uint64_t> covered;
  std::vector<Mat2> coset_reps;
  for (const Mat2& x : ambient.elements()) {
    if (covered.count(x.index()) != 0) continue;
    for (const Mat2& b : base.elements()) covered.insert((x * b).index());
    coset_reps.push_back(x);
  }

  SubgroupCollector out;
  std::deque<Subgroup> queue{base};
  out.add(base);
  while (!queue.empty()) {
    const Subgroup h = std::move(queue.front());
    queue.pop_front();
    for (const Mat2& r : coset_reps) {
      if (h.contains(r)) continue;
      std::vector<Mat2> gens = h.generators();
      gens.push_back(r);
      Subgroup k = closure(ambient.modulus(), gens);
      if (out.add(k)) queue.push_back(std::move(k));
    }
  }
  return std::move(out).take();
}

std::size_t HarnessReport::total_checked() const {
  return std::accumulate(rows.begin(), rows.end(), std::size_t{0},
                         [](std::size_t s, const HarnessRow& r) { return s + r.checked; });
}

std::size_t HarnessReport::total_violations() const {
  return std::accumulate(rows.begin(), rows.end(), std::size_t{0},
                         [](std::size_t s, const HarnessRow& r) { return s + r.violations; });
}

const std::vector<std::string>& harness_ids() {
  static const std::vector<std::string> ids{"sl",     "ab-subgp", "cyclic",   "normalizers", "ns-nns",
                                            "easy-d", "classify", "not-bl",   "bl",          "l-part"};
  return ids;
}

namespace {

constexpr std::size_t kMaxMessages = 20;

// Records violations and out-of-hypothesis candidates for one prime.
class RowRecorder {
 public:
  RowRecorder(HarnessReport& report, HarnessRow& row) : report_(report), row_(row) {}

  /// Runs f; LemmaViolation counts as a violation, PreconditionError as excluded.
  template <typename F>
  void attempt(F&& f) {
    try {
      f();
      ++row_.checked;
    } catch (const LemmaViolation& e) {
      violation(std::string(e.what()));
    } catch (const PreconditionError&) {
      ++row_.excluded;
    }
  }

  void violation(const std::string& what) {
    ++row_.checked;
    ++row_.violations;
    if (report_.messages.size() < kMaxMessages) {
      report_.messages.push_back("l = " + std::to_string(row_.ell) + ": " + what);
    }
  }

  void exclude() { ++row_.excluded; }

 private:
  HarnessReport& report_;
  HarnessRow& row_;
};

bool is_scalar_group(const Subgroup& g) {
  return std::all_of(g.elements().begin(), g.elements().end(), [](const Mat2& x) { return x.is_scalar(); });
}

std::size_t order_of(const Mat2& x) { return powers(x).size(); }

// ---- individual harnesses ---------------------------------------------------

void run_sl(std::int64_t p, RowRecorder& rec, HarnessRow& row) {
  std::size_t longest = 0;
  for (Residue a = 0; a < p; ++a)
    for (Residue b = 0; b < p; ++b)
      for (Residue c = 0; c < p; ++c)
        for (Residue d = 0; d < p; ++d) {
          const Mat2 x(p, a, b, c, d);
          if (x.det() != 1) continue;
          rec.attempt([&] {
            const SL2Word w = decompose_sl2(x);
            longest = std::max(longest, w.letters.size());
            if (w.evaluate() != x) throw LemmaViolation("sl", "word does not evaluate to " + to_string(x));
            if (w.letters.size() > 12) throw LemmaViolation("sl", "word longer than 12 letters for " + to_string(x));
          });
        }
  row.note = "longest word " + std::to_string(longest);
}

void check_cartan_embedding(const Subgroup& h, RowRecorder& rec, std::size_t& fallbacks) {
  rec.attempt([&] {
    const CartanEmbedding e = conjugate_into_cartan(h);
    if (e.used_search_fallback) ++fallbacks;
    const bool split_feasible = search_cartan_conjugator(h, CartanTarget::Split).has_value();
    const bool nonsplit_feasible = search_cartan_conjugator(h, CartanTarget::Nonsplit).has_value();
    const bool feasible = e.target == CartanTarget::Split ? split_feasible : nonsplit_feasible;
    if (!feasible) throw LemmaViolation("ab-subgp", "search finds no conjugator into the constructed target");
    // A non-scalar group fits at most one Cartan.
    if (!is_scalar_group(h) && split_feasible && nonsplit_feasible) {
      throw LemmaViolation("ab-subgp", "non-scalar group conjugate into both Cartans");
    }
  });
}

void run_ab_subgp(std::int64_t p, const HarnessOptions& opt, RowRecorder& rec, HarnessRow& row) {
  const Modulus m(p);
  const std::vector<Mat2> all = gl2_elements(p);
  std::size_t fallbacks = 0;
  std::size_t cyclic = 0;
  for (const Mat2& x : cyclic_subgroup_generators(all)) {
    if (order_of(x) % static_cast<std::size_t>(p) == 0) {
      rec.exclude();
      continue;
    }
    ++cyclic;
    check_cartan_embedding(closure(m, {x}), rec, fallbacks);
  }

  std::mt19937_64 rng(opt.seed ^ static_cast<std::uint64_t>(p));
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  std::uniform_int_distribution<Residue> coef(0, p - 1);
  const auto random_semisimple = [&] {
    for (;;) {
      const Mat2& x = all[pick(rng)];
      if (order_of(x) % static_cast<std::size_t>(p) != 0) return x;
    }
  };
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const Mat2 x = random_semisimple();
    Mat2 y = x;
    if (x.is_scalar()) {
      y = random_semisimple();
    } else {
      // The centralizer of a non-scalar x is F_l[x]^x.
      do {
        const Residue s = coef(rng);
        const Residue t = coef(rng);
        y = Mat2(p, s + t * x.a(), t * x.b(), t * x.c(), s + t * x.d());
      } while (!y.is_invertible());
    }
    check_cartan_embedding(closure(m, {x, y}), rec, fallbacks);
  }
  row.note = std::to_string(cyclic) + " cyclic, " + std::to_string(opt.samples) + " random, " +
             std::to_string(fallbacks) + " search fallbacks";
}

void run_cyclic(std::int64_t p, RowRecorder& rec, HarnessRow& row) {
  const Modulus m(p);
  std::vector<Mat2> odd;
  for (const Mat2& x : gl2_elements(p)) {
    if (x.det() != 1) continue;
    const std::size_t k = order_of(x);
    if (k % 2 == 1 && k % static_cast<std::size_t>(p) != 0) odd.push_back(x);
  }
  const std::vector<Mat2> reps = cyclic_subgroup_generators(odd);
  SubgroupCollector groups;
  groups.add(closure(m, std::vector<Mat2>{}));
  for (std::size_t i = 0; i < reps.size(); ++i) {
    groups.add(closure(m, {reps[i]}));
    for (std::size_t j = i + 1; j < reps.size(); ++j) groups.add(closure(m, {reps[i], reps[j]}));
  }
  for (const Subgroup& h : std::move(groups).take()) {
    if (h.order() % 2 == 0 || h.order() % static_cast<std::size_t>(p) == 0) {
      // Two odd-order elements generating a group of even order or order
      // divisible by l: outside the hypotheses.
      rec.exclude();
      continue;
    }
    rec.attempt([&] {
      const Mat2 g = cyclic_generator(h);
      if (!(closure(m, {g}) == h)) throw LemmaViolation("cyclic", "returned element does not generate H");
    });
  }
  row.note = std::to_string(reps.size()) + " odd cyclic subgroups";
}

void run_normalizers(std::int64_t p, RowRecorder& rec, HarnessRow& row) {
  std::size_t scanned = 0;
  for (const auto& [cartan, norm] : {std::pair{NamedGroupId::SplitCartan, NamedGroupId::NormSplit},
                                     std::pair{NamedGroupId::NonsplitCartan, NamedGroupId::NormNonsplit}}) {
    for (const Subgroup& h : two_generated_subgroups(named_group(cartan, p))) {
      if (is_scalar_group(h)) {
        rec.exclude();
        continue;
      }
      ++scanned;
      rec.attempt([&, norm = norm] {
        const Subgroup n = normalizer_in_gl2(h);
        if (!is_subgroup_of(h, n)) throw LemmaViolation("normalizers", "normalizer does not contain H");
        if (!contained_in(n, norm)) {
          throw LemmaViolation("normalizers", std::string("normalizer of a subgroup of order ") +
                                                  std::to_string(h.order()) + " leaves " + to_string(norm));
        }
      });
    }
  }
  row.note = std::to_string(scanned) + " non-scalar Cartan subgroups";
}

void run_ns_nns(std::int64_t p, RowRecorder& rec, HarnessRow& row) {
  const auto groups = two_generated_subgroups_up_to_conjugacy(p);
  const Mat2 minus = Mat2::scalar(p, -1);
  for (const Subgroup& h : groups) {
    const Subgroup h0 = sl_part(h);
    const bool pm = std::all_of(h0.elements().begin(), h0.elements().end(),
                                [&](const Mat2& x) { return x.is_identity() || x == minus; });
    const bool odd = h0.order() % 2 == 1 && h0.order() % static_cast<std::size_t>(p) != 0;
    if (!pm && !odd) {
      rec.exclude();
      continue;
    }
    rec.attempt([&] { conjugate_into_normalizer(h); });
  }
  row.note = std::to_string(groups.size()) + " subgroups up to conjugacy";
}

void run_easy_d(std::int64_t p, RowRecorder& rec, HarnessRow& row) {
  const auto groups = two_generated_subgroups_up_to_conjugacy(p);
  const auto points = ProjPoint::all(p);
  for (const Subgroup& g : groups) {
    rec.attempt([&] {
      for (const ProjPoint& pt : points) unipotent_class(g, pt);
    });
  }
  row.note = std::to_string(groups.size()) + " subgroups up to conjugacy, " + std::to_string(points.size()) +
             " points each";
}

void run_classify(std::int64_t p, RowRecorder& rec, HarnessRow& row) {
  const auto groups = two_generated_subgroups_up_to_conjugacy(p);
  const auto points = ProjPoint::all(p);
  std::map<std::string, std::size_t> targets;
  for (const Subgroup& g : groups) {
    const auto odd = std::find_if(points.begin(), points.end(), [&](const ProjPoint& pt) {
      return vector_index(g, pt.c(), pt.d()) % 2 == 1;
    });
    if (odd == points.end()) {
      rec.exclude();
      continue;
    }
    rec.attempt([&] { ++targets[to_string(classify_image(g, *odd).target)]; });
  }
  std::string note = std::to_string(groups.size()) + " subgroups up to conjugacy;";
  for (const auto& [name, count] : targets) note += " " + name + " " + std::to_string(count);
  row.note = note;
}

void run_not_bl(std::int64_t p, RowRecorder& rec, HarnessRow& row) {
  const Modulus m(p);
  const Residue alpha = primitive_root(p);
  const Mat2 gamma = nonsplit_matrix(nonsplit_generator(p));
  const Subgroup nns = named_group(NamedGroupId::NormNonsplit, p);
  const Subgroup ns = named_group(NamedGroupId::NormSplit, p);
  std::size_t candidates = 0;
  for (const int e : {1, 2, 3, 4, 6}) {
    BlHypotheses hyp;
    hyp.det_surjective = true;
    hyp.inertia_exponent = e;
    const Residue ae = pow_mod(alpha, static_cast<std::uint64_t>(e), p);
    const Subgroup base_nns = closure(m, {mat_pow(gamma, e)});
    const Subgroup base_ns = closure(m, {Mat2::diag(p, ae, 1), Mat2::diag(p, 1, ae)});
    std::vector<Subgroup> family = intermediate_subgroups(base_nns, nns);
    for (Subgroup& h : intermediate_subgroups(base_ns, ns)) {
      if (!contained_in(h, NamedGroupId::SplitCartan)) family.push_back(std::move(h));
    }
    candidates += family.size();
    for (const Subgroup& h : family) rec.attempt([&] { not_bl_check(h, hyp); });
  }
  row.note = std::to_string(candidates) + " (e, H) pairs; excluded = det not surjective";
}

void run_bl(std::int64_t p, RowRecorder& rec, HarnessRow& row) {
  std::vector<Subgroup> family;
  if (p == 11) {
    family = two_generated_subgroups(named_group(NamedGroupId::Borel, p));
    row.note = std::to_string(family.size()) + " two-generated subgroups of B";
  } else {
    family = {named_group(NamedGroupId::DeltaU1, p), named_group(NamedGroupId::DeltaU2, p)};
    row.note = "<Delta_1, U> and <Delta_2, U> only";
  }
  std::size_t delta1 = 0;
  std::size_t delta2 = 0;
  for (const Subgroup& g : family) {
    for (const int e : {1, 2, 3, 4, 6}) {
      BlHypotheses hyp;
      hyp.det_surjective = true;
      hyp.odd_degree_point_exists = true;
      hyp.inertia_exponent = e;
      rec.attempt([&] {
        const BlVerdict v = derive_delta(g, hyp);
        ++(v.delta_kind == DeltaKind::Delta1 ? delta1 : delta2);
      });
    }
  }
  row.note += "; verdicts Delta1 " + std::to_string(delta1) + ", Delta2 " + std::to_string(delta2);
}

struct LPartInstance {
  AbelianGroupSpec a;
  AbelianGroupSpec b;
  AbelianEmbedding f;
  std::uint64_t n;
  std::uint64_t n_prime;
};

LPartInstance random_lpart_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> factors(1, 3);
  std::uniform_int_distribution<std::uint64_t> order(1, 64);
  std::uniform_int_distribution<std::uint64_t> small(0, 3);
  std::bernoulli_distribution coin(0.5);
  for (;;) {
    LPartInstance in;
    in.n = small(rng);
    in.n_prime = in.n + 1 + small(rng);
    const std::size_t ka = factors(rng);
    for (std::size_t i = 0; i < ka; ++i) in.a.cyclic_orders.push_back(order(rng));
    if (coin(rng)) {
      // B = sum of Z/(a_i k_i) (plus maybe one more factor), A embedded diagonally.
      for (std::size_t i = 0; i < ka; ++i) {
        const std::uint64_t k = 1 + small(rng);
        if (in.a.cyclic_orders[i] * k > 64) {
          in.b.cyclic_orders.push_back(in.a.cyclic_orders[i]);
        } else {
          in.b.cyclic_orders.push_back(in.a.cyclic_orders[i] * k);
        }
      }
      if (ka < 3 && coin(rng)) in.b.cyclic_orders.push_back(order(rng));
      for (std::size_t i = 0; i < ka; ++i) {
        AbelianElement img(in.b.cyclic_orders.size(), 0);
        img[i] = (in.b.cyclic_orders[i] / in.a.cyclic_orders[i]) % in.b.cyclic_orders[i];
        in.f.push_back(img);
      }
      return in;
    }
    const std::size_t kb = factors(rng);
    for (std::size_t i = 0; i < kb; ++i) in.b.cyclic_orders.push_back(order(rng));
    // Random images killed by the generator orders; retried until injective.
    for (int attempt = 0; attempt < 20; ++attempt) {
      in.f.clear();
      for (const std::uint64_t ai : in.a.cyclic_orders) {
        AbelianElement img;
        for (const std::uint64_t bj : in.b.cyclic_orders) {
          const std::uint64_t step = bj / std::gcd(bj, ai);
          std::uniform_int_distribution<std::uint64_t> mult(0, bj / step - 1);
          img.push_back(step * mult(rng));
        }
        in.f.push_back(img);
      }
      try {
        validate_embedding(in.a, in.b, in.f);
        return in;
      } catch (const PreconditionError&) {
      }
    }
  }
}

void run_l_part(std::int64_t p, const HarnessOptions& opt, RowRecorder& rec, HarnessRow& row) {
  std::mt19937_64 rng(opt.seed ^ (static_cast<std::uint64_t>(p) << 20));
  std::size_t verified = 0;
  std::size_t hyp_fails = 0;
  for (std::size_t i = 0; i < opt.samples; ++i) {
    const LPartInstance in = random_lpart_instance(rng);
    rec.attempt([&] {
      const LPartResult r = l_part_check(in.a, in.b, in.f, static_cast<std::uint64_t>(p), in.n, in.n_prime);
      ++(r.verdict == LPartVerdict::ConclusionVerified ? verified : hyp_fails);
    });
  }
  row.note = "ConclusionVerified " + std::to_string(verified) + ", HypothesisFails " + std::to_string(hyp_fails);
}

struct HarnessLimits {
  std::int64_t min_ell;
  std::int64_t cap;
};

HarnessLimits limits_of(const std::string& id) {
  static const std::map<std::string, HarnessLimits> limits{
      {"sl", {3, 31}},      {"ab-subgp", {3, 11}}, {"cyclic", {3, 13}}, {"normalizers", {3, 13}},
      {"ns-nns", {3, 7}},   {"easy-d", {3, 7}},    {"classify", {5, 7}}, {"not-bl", {5, 13}},
      {"bl", {11, 61}},     {"l-part", {2, 1000}},
  };
  const auto it = limits.find(id);
  if (it == limits.end()) throw PreconditionError("unknown lemma id '" + id + "'");
  return it->second;
}

}  // namespace

HarnessReport run_harness(const std::string& id, const HarnessOptions& options) {
  const HarnessLimits limits = limits_of(id);
  HarnessReport report{id, {}, {}};
  for (std::int64_t p = std::max(options.ell_min, limits.min_ell); p <= options.ell_max; ++p) {
    if (!is_prime(static_cast<std::uint64_t>(p))) continue;
    report.rows.push_back({p, false, 0, 0, 0, {}});
    HarnessRow& row = report.rows.back();
    if (p > limits.cap) {
      row.skipped = true;
      row.note = "above the scan cap l <= " + std::to_string(limits.cap);
      continue;
    }
    RowRecorder rec(report, row);
    if (id == "sl") run_sl(p, rec, row);
    else if (id == "ab-subgp") run_ab_subgp(p, options, rec, row);
    else if (id == "cyclic") run_cyclic(p, rec, row);
    else if (id == "normalizers") run_normalizers(p, rec, row);
    else if (id == "ns-nns") run_ns_nns(p, rec, row);
    else if (id == "easy-d") run_easy_d(p, rec, row);
    else if (id == "classify") run_classify(p, rec, row);
    else if (id == "not-bl") run_not_bl(p, rec, row);
    else if (id == "bl") run_bl(p, rec, row);
    else run_l_part(p, options, rec, row);
  }
  return report;
}

}  // namespace gl2kit
