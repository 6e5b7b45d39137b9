#include "gl2kit/stabilizers.hpp"

#include <algorithm>
#include <numeric>

#include "gl2kit/errors.hpp"

namespace gl2kit {

ProjPoint::ProjPoint(std::int64_t ell, Residue c, Residue d) : ell_(ell), c_(0), d_(1) {
  require_odd_prime(ell, "ProjPoint");
  c = reduce(c, ell);
  d = reduce(d, ell);
  if (c == 0 && d == 0) throw PreconditionError("ProjPoint: zero vector");
  if (c != 0) {
    c_ = 1;
    d_ = mul_mod(d, *inv_mod(c, ell), ell);
  }
}

std::vector<ProjPoint> ProjPoint::all(std::int64_t ell) {
  std::vector<ProjPoint> out{ProjPoint(ell, 0, 1)};
  for (Residue s = 0; s < ell; ++s) out.emplace_back(ell, 1, s);
  return out;
}

namespace {

void check_vector(const Subgroup& g, Residue& c, Residue& d) {
  c = reduce(c, g.n());
  d = reduce(d, g.n());
  if (c == 0 && d == 0) throw PreconditionError("stabilizer of the zero vector");
}

bool fixes(const Mat2& x, Residue c, Residue d) {
  const auto [c2, d2] = act_right(c, d, x);
  return c2 == c && d2 == d;
}

}  // namespace

Subgroup vector_stabilizer(const Subgroup& g, Residue c, Residue d) {
  check_vector(g, c, d);
  std::vector<Mat2> out;
  for (const Mat2& x : g.elements()) {
    if (fixes(x, c, d)) out.push_back(x);
  }
  return Subgroup::from_elements(g.modulus(), std::move(out));
}

std::size_t vector_stabilizer_order(const Subgroup& g, Residue c, Residue d) {
  check_vector(g, c, d);
  return static_cast<std::size_t>(std::count_if(g.elements().begin(), g.elements().end(),
                                                [&](const Mat2& x) { return fixes(x, c, d); }));
}

Subgroup stabilizer(const Subgroup& g, const ProjPoint& p) {
  if (g.n() != p.ell()) throw PreconditionError("stabilizer: modulus mismatch");
  return vector_stabilizer(g, p.c(), p.d());
}

Subgroup sl_part(const Subgroup& g) {
  std::vector<Mat2> out;
  for (const Mat2& x : g.elements()) {
    if (x.det() == 1) out.push_back(x);
  }
  return Subgroup::from_elements(g.modulus(), std::move(out));
}

std::size_t sl_index(const Subgroup& g) {
  const auto ones = std::count_if(g.elements().begin(), g.elements().end(),
                                  [](const Mat2& x) { return x.det() == 1; });
  return g.order() / static_cast<std::size_t>(ones);
}

Mat2 unipotent_conjugator(const Mat2& x) {
  const std::int64_t p = x.modulus();
  // Column kernel vector of x - I.
  Residue w1 = x.b();
  Residue w2 = reduce(1 - x.a(), p);
  if (w1 == 0 && w2 == 0) {
    w1 = reduce(1 - x.d(), p);
    w2 = x.c();
  }
  return w1 != 0 ? Mat2(p, w1, 0, w2, 1) : Mat2(p, w1, 1, w2, 0);
}

UnipotentClass unipotent_class(const Subgroup& g, Residue c, Residue d) {
  check_vector(g, c, d);
  std::vector<Mat2> fixed_sl;
  for (const Mat2& x : g.elements()) {
    if (x.det() == 1 && fixes(x, c, d)) fixed_sl.push_back(x);
  }
  if (fixed_sl.size() == 1) return {UnipotentKind::Trivial, std::nullopt};

  const std::int64_t p = g.n();
  const std::string where = "G°_{" + std::to_string(c) + " " + std::to_string(d) + "}";
  if (fixed_sl.size() != static_cast<std::size_t>(p)) {
    throw LemmaViolation("easy-d", where + " has order " + std::to_string(fixed_sl.size()));
  }
  const Mat2& x = *std::find_if(fixed_sl.begin(), fixed_sl.end(),
                                [](const Mat2& y) { return !y.is_identity(); });
  const Mat2 t = unipotent_conjugator(x);
  if (!t.is_invertible()) throw LemmaViolation("easy-d", where + ": no unipotent conjugator");

  const Mat2 t_inv = mat_inv(t);
  std::vector<Mat2> conj;
  for (const Mat2& y : fixed_sl) conj.push_back(t_inv * y * t);
  std::sort(conj.begin(), conj.end());
  const Subgroup u = closure(g.modulus(), {Mat2::upper_unipotent(p)});
  if (conj != u.elements()) {
    throw LemmaViolation("easy-d", where + " is not conjugate to <U>");
  }
  return {UnipotentKind::OrderEll, t};
}

UnipotentClass unipotent_class(const Subgroup& g, const ProjPoint& p) {
  if (g.n() != p.ell()) throw PreconditionError("unipotent_class: modulus mismatch");
  return unipotent_class(g, p.c(), p.d());
}

const SpectrumEntry& DegreeSpectrum::at(Residue c, Residue d) const {
  c = reduce(c, ell);
  d = reduce(d, ell);
  if (!exhaustive) {
    const ProjPoint p(ell, c, d);
    c = p.c();
    d = p.d();
  }
  for (const auto& e : entries) {
    if (e.c == c && e.d == d) return e;
  }
  throw PreconditionError("spectrum has no entry for (" + std::to_string(c) + ", " +
                          std::to_string(d) + ")");
}

namespace {

void require_prime_modulus(const Subgroup& g, const char* what) {
  if (!g.modulus().is_prime() || g.n() == 2) {
    throw PreconditionError(std::string(what) + ": modulus must be an odd prime");
  }
}

}  // namespace

DegreeSpectrum degree_spectrum(const Subgroup& g) {
  require_prime_modulus(g, "degree_spectrum");
  DegreeSpectrum s{g.n(), g.order(), sl_index(g), false, {}};
  for (const ProjPoint& p : ProjPoint::all(g.n())) {
    const auto stab = vector_stabilizer_order(g, p.c(), p.d());
    s.entries.push_back({p.c(), p.d(), stab, g.order() / stab});
  }
  return s;
}

DegreeSpectrum exhaustive_spectrum(const Subgroup& g) {
  require_prime_modulus(g, "exhaustive_spectrum");
  const std::int64_t p = g.n();
  const auto slot = [p](Residue c, Residue d) { return static_cast<std::size_t>(c * p + d); };

  // Orbit of each vector under the generators; [G : G_v] = |orbit(v)|.
  std::vector<std::size_t> orbit_size(static_cast<std::size_t>(p * p), 0);
  std::vector<std::pair<Residue, Residue>> orbit;
  for (Residue c = 0; c < p; ++c) {
    for (Residue d = 0; d < p; ++d) {
      if ((c == 0 && d == 0) || orbit_size[slot(c, d)] != 0) continue;
      orbit.assign({{c, d}});
      orbit_size[slot(c, d)] = 1;
      for (std::size_t i = 0; i < orbit.size(); ++i) {
        for (const Mat2& gen : g.generators()) {
          const auto [c2, d2] = act_right(orbit[i].first, orbit[i].second, gen);
          if (orbit_size[slot(c2, d2)] == 0) {
            orbit_size[slot(c2, d2)] = 1;
            orbit.emplace_back(c2, d2);
          }
        }
      }
      for (const auto& [oc, od] : orbit) orbit_size[slot(oc, od)] = orbit.size();
    }
  }

  DegreeSpectrum s{p, g.order(), sl_index(g), true, {}};
  for (Residue c = 0; c < p; ++c) {
    for (Residue d = 0; d < p; ++d) {
      if (c == 0 && d == 0) continue;
      const auto index = orbit_size[slot(c, d)];
      s.entries.push_back({c, d, g.order() / index, index});
    }
  }
  return s;
}

FixedModule fixed_module(const Subgroup& g) {
  // v (A - I) = 0 for every generator A. Stack the A - I side by side into a
  // 2 x 2k integer matrix M; its Smith form diag(d1, d2) gives the kernel
  // Z/gcd(d1, N) x Z/gcd(d2, N). d1 = gcd of entries, d1 d2 = gcd of 2x2 minors.
  const std::int64_t n = g.n();
  std::vector<std::array<std::int64_t, 2>> cols;
  for (const Mat2& x : g.generators()) {
    const Mat2 y(n, x.a() - 1, x.b(), x.c(), x.d() - 1);
    cols.push_back({y.a(), y.c()});
    cols.push_back({y.b(), y.d()});
  }
  std::int64_t d1 = 0;
  for (const auto& col : cols) d1 = std::gcd(d1, std::gcd(col[0], col[1]));
  std::int64_t minors = 0;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = i + 1; j < cols.size(); ++j) {
      minors = std::gcd(minors, cols[i][0] * cols[j][1] - cols[j][0] * cols[i][1]);
    }
  }
  const std::int64_t d2 = d1 == 0 ? 0 : minors / d1;
  return {std::gcd(d1, n), std::gcd(d2, n)};
}

}  // namespace gl2kit
