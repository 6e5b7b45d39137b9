#include "gl2kit/groups.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "gl2kit/errors.hpp"

namespace gl2kit {

namespace {

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 24;

// Membership set for matrices mod n: a bitmap over the dense index when n^4 is
// small, a hash set otherwise.
class MatrixSet {
 public:
  explicit MatrixSet(std::int64_t n) {
    const auto nn = static_cast<std::uint64_t>(n);
    if (nn <= 64 && nn * nn * nn * nn <= kDenseLimit) dense_.assign(nn * nn * nn * nn, false);
  }

  /// Returns true when x was not present before.
  bool insert(const Mat2& x) {
    if (!dense_.empty()) {
      auto slot = dense_[x.index()];
      if (slot) return false;
      slot = true;
      return true;
    }
    return sparse_.insert(x).second;
  }

 private:
  std::vector<bool> dense_;
  std::unordered_set<Mat2, Mat2Hash> sparse_;
};

void check_generator(const Modulus& m, const Mat2& g) {
  if (g.modulus() != m.value()) {
    throw PreconditionError("generator " + to_string(g) + " has modulus " +
                            std::to_string(g.modulus()) + ", expected " +
                            std::to_string(m.value()));
  }
  if (!g.is_invertible()) throw PreconditionError("generator " + to_string(g) + " is singular");
}

}  // namespace

Subgroup closure(const Modulus& modulus, std::span<const Mat2> generators, ClosureOptions options) {
  std::vector<Mat2> gens;
  for (const Mat2& g : generators) {
    check_generator(modulus, g);
    if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
  }

  const std::int64_t n = modulus.value();
  MatrixSet seen(n);
  std::vector<Mat2> elements{Mat2::identity(n)};
  seen.insert(elements.front());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const Mat2& g : gens) {
      Mat2 y = elements[i] * g;
      if (seen.insert(y)) {
        elements.push_back(y);
        if (elements.size() > options.max_order) {
          throw ResourceError("closure exceeded " + std::to_string(options.max_order) +
                              " elements");
        }
      }
    }
  }
  std::sort(elements.begin(), elements.end());
  return Subgroup(modulus, std::move(gens), std::move(elements));
}

bool Subgroup::contains(const Mat2& x) const {
  return x.modulus() == n() && std::binary_search(elements_.begin(), elements_.end(), x);
}

bool Subgroup::is_abelian() const {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    for (std::size_t j = i + 1; j < generators_.size(); ++j) {
      if (generators_[i] * generators_[j] != generators_[j] * generators_[i]) return false;
    }
  }
  return true;
}

Subgroup Subgroup::conjugated(const Mat2& t) const {
  const Mat2 t_inv = mat_inv(t);
  std::vector<Mat2> gens, elems;
  gens.reserve(generators_.size());
  elems.reserve(elements_.size());
  for (const Mat2& g : generators_) gens.push_back(t_inv * g * t);
  for (const Mat2& x : elements_) elems.push_back(t_inv * x * t);
  std::sort(elems.begin(), elems.end());
  return Subgroup(modulus_, std::move(gens), std::move(elems));
}

Subgroup Subgroup::from_elements(const Modulus& m, std::vector<Mat2> elements, bool verify) {
  for (const Mat2& x : elements) check_generator(m, x);
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (!verify) {
    auto gens = elements;
    return Subgroup(m, std::move(gens), std::move(elements));
  }

  std::vector<Mat2> gens;
  Subgroup current = closure(m, gens);
  for (const Mat2& x : elements) {
    if (current.contains(x)) continue;
    gens.push_back(x);
    try {
      current = closure(m, gens, ClosureOptions{elements.size()});
    } catch (const ResourceError&) {
      throw PreconditionError("element set is not closed under multiplication");
    }
  }
  if (current.elements_ != elements) {
    throw PreconditionError("element set is not closed under multiplication");
  }
  return current;
}

bool is_subgroup_of(const Subgroup& h, const Subgroup& g) {
  if (h.n() != g.n()) throw PreconditionError("is_subgroup_of: modulus mismatch");
  return std::includes(g.elements().begin(), g.elements().end(), h.elements().begin(),
                       h.elements().end());
}

std::vector<Mat2> gl2_elements(std::int64_t n, std::size_t max_order) {
  if (gl2_order(static_cast<std::uint64_t>(n)) > max_order) {
    throw ResourceError("GL_2(Z/" + std::to_string(n) + ") is larger than the scan cap");
  }
  std::vector<Mat2> out;
  for (Residue a = 0; a < n; ++a)
    for (Residue b = 0; b < n; ++b)
      for (Residue c = 0; c < n; ++c)
        for (Residue d = 0; d < n; ++d) {
          Mat2 x(n, a, b, c, d);
          if (x.is_invertible()) out.push_back(x);
        }
  return out;
}

std::vector<Residue> determinant_image(const Subgroup& g) {
  std::vector<Residue> dets;
  for (const Mat2& x : g.elements()) dets.push_back(x.det());
  std::sort(dets.begin(), dets.end());
  dets.erase(std::unique(dets.begin(), dets.end()), dets.end());
  return dets;
}

// ---------------------------------------------------------------------------

Mat2 diagexp(std::int64_t ell, std::int64_t u, std::int64_t t) {
  const Residue alpha = primitive_root(ell);
  const auto e = ell - 1;
  return Mat2::diag(ell, pow_mod(alpha, static_cast<std::uint64_t>(reduce(u, e)), ell),
                    pow_mod(alpha, static_cast<std::uint64_t>(reduce(t, e)), ell));
}

DiscreteLog::DiscreteLog(std::int64_t ell)
    : ell_(ell), alpha_(primitive_root(ell)), table_(static_cast<std::size_t>(ell), -1) {
  Residue x = 1;
  for (std::int64_t k = 0; k < ell - 1; ++k) {
    table_[static_cast<std::size_t>(x)] = k;
    x = mul_mod(x, alpha_, ell);
  }
}

std::int64_t DiscreteLog::log(Residue x) const {
  x = reduce(x, ell_);
  if (x == 0) throw PreconditionError("discrete log of zero");
  return table_[static_cast<std::size_t>(x)];
}

DiagExpPair DiscreteLog::diag_log(const Mat2& x) const {
  if (x.modulus() != ell_ || !x.is_diagonal() || !x.is_invertible()) {
    throw PreconditionError("diag_log: " + to_string(x) + " is not an invertible diagonal matrix");
  }
  return {ell_, log(x.a()), log(x.d())};
}

const char* to_string(NamedGroupId id) {
  switch (id) {
    case NamedGroupId::Borel: return "Borel";
    case NamedGroupId::SplitCartan: return "SplitCartan";
    case NamedGroupId::NonsplitCartan: return "NonsplitCartan";
    case NamedGroupId::NormSplit: return "NormSplit";
    case NamedGroupId::NormNonsplit: return "NormNonsplit";
    case NamedGroupId::SL2: return "SL2";
    case NamedGroupId::Delta1: return "Delta1";
    case NamedGroupId::Delta2: return "Delta2";
    case NamedGroupId::DeltaU1: return "DeltaU1";
    case NamedGroupId::DeltaU2: return "DeltaU2";
  }
  return "?";
}

NamedGroupId named_group_from_string(const std::string& name) {
  for (auto id : {NamedGroupId::Borel, NamedGroupId::SplitCartan, NamedGroupId::NonsplitCartan,
                  NamedGroupId::NormSplit, NamedGroupId::NormNonsplit, NamedGroupId::SL2,
                  NamedGroupId::Delta1, NamedGroupId::Delta2, NamedGroupId::DeltaU1,
                  NamedGroupId::DeltaU2}) {
    if (name == to_string(id)) return id;
  }
  throw PreconditionError("unknown named group '" + name + "'");
}

int tau(std::int64_t ell) {
  require_odd_prime(ell, "tau");
  if (ell % 3 == 0) throw PreconditionError("tau: l = 0 (mod 3)");
  return ell % 3 == 2 ? 1 : 3;
}

QuadExtElem nonsplit_generator(std::int64_t ell) {
  const auto target = static_cast<std::uint64_t>(ell * ell - 1);
  for (Residue im = 1; im < ell; ++im) {
    for (Residue re = 0; re < ell; ++re) {
      auto x = QuadExtElem::standard(ell, re, im);
      if (multiplicative_order(x) == target) return x;
    }
  }
  throw LemmaViolation("F_{l^2}^x cyclic", "no generator found for l = " + std::to_string(ell));
}

Mat2 nonsplit_matrix(const QuadExtElem& x) {
  const auto p = x.ell();
  return {p, x.re(), mul_mod(x.im(), x.alpha(), p), x.im(), x.re()};
}

namespace {

bool is_delta_case(NamedGroupId id) {
  return id == NamedGroupId::Delta1 || id == NamedGroupId::Delta2 ||
         id == NamedGroupId::DeltaU1 || id == NamedGroupId::DeltaU2;
}

void check_named_prime(NamedGroupId id, std::int64_t ell) {
  require_odd_prime(ell, to_string(id));
  if (is_delta_case(id) && ell < 5) {
    throw PreconditionError(std::string(to_string(id)) + " requires l >= 5");
  }
}

}  // namespace

std::vector<Mat2> named_group_generators(NamedGroupId id, std::int64_t ell) {
  check_named_prime(id, ell);
  const Residue alpha = primitive_root(ell);
  const Mat2 u = Mat2::upper_unipotent(ell);
  const std::vector<Mat2> split{Mat2::diag(ell, alpha, 1), Mat2::diag(ell, 1, alpha)};
  const Mat2 nonsplit = nonsplit_matrix(nonsplit_generator(ell));

  switch (id) {
    case NamedGroupId::Borel: return {split[0], split[1], u};
    case NamedGroupId::SplitCartan: return split;
    case NamedGroupId::NonsplitCartan: return {nonsplit};
    case NamedGroupId::NormSplit: return {split[0], split[1], Mat2(ell, 0, 1, 1, 0)};
    case NamedGroupId::NormNonsplit: return {nonsplit, Mat2(ell, 1, 0, 0, -1)};
    case NamedGroupId::SL2: return {u, Mat2::lower_unipotent(ell)};
    default: break;
  }

  const int t = tau(ell);
  const std::int64_t m = (ell - 1) / (2 * t);
  const Mat2 scalar_part = diagexp(ell, 2 * t, 2 * t);
  std::vector<Mat2> gens;
  if (id == NamedGroupId::Delta1 || id == NamedGroupId::DeltaU1) {
    gens = {scalar_part, diagexp(ell, 0, m)};
  } else {
    gens = {scalar_part, diagexp(ell, m, 0)};
  }
  if (id == NamedGroupId::DeltaU1 || id == NamedGroupId::DeltaU2) gens.push_back(u);
  return gens;
}

Subgroup named_group(NamedGroupId id, std::int64_t ell) {
  return closure(Modulus(ell), named_group_generators(id, ell));
}

bool is_member(NamedGroupId id, std::int64_t ell, const Mat2& x) {
  if (x.modulus() != ell || !x.is_invertible()) return false;
  const Residue alpha = primitive_root(ell);
  const auto in_cns = [&] { return x.a() == x.d() && x.b() == mul_mod(x.c(), alpha, ell); };
  const auto in_cns_twisted = [&] {
    return x.d() == reduce(-x.a(), ell) && x.b() == reduce(-mul_mod(x.c(), alpha, ell), ell);
  };

  switch (id) {
    case NamedGroupId::Borel: return x.c() == 0;
    case NamedGroupId::SplitCartan: return x.is_diagonal();
    case NamedGroupId::NonsplitCartan: return in_cns();
    case NamedGroupId::NormSplit: return x.is_diagonal() || (x.a() == 0 && x.d() == 0);
    case NamedGroupId::NormNonsplit: return in_cns() || in_cns_twisted();
    case NamedGroupId::SL2: return x.det() == 1;
    default: break;
  }

  // Delta_1 = {diagexp(u, t) : 2 tau | u, m | t - u}, Delta_2 the same with u, t swapped,
  // m = (l - 1) / 2 tau. DeltaU_i adds an arbitrary upper-right entry.
  const bool with_u = id == NamedGroupId::DeltaU1 || id == NamedGroupId::DeltaU2;
  if (x.c() != 0 || (!with_u && x.b() != 0)) return false;
  const int t = tau(ell);
  const std::int64_t m = (ell - 1) / (2 * t);
  const DiscreteLog dlog(ell);
  std::int64_t first = dlog.log(x.a());
  std::int64_t second = dlog.log(x.d());
  if (id == NamedGroupId::Delta2 || id == NamedGroupId::DeltaU2) std::swap(first, second);
  return first % (2 * t) == 0 && reduce(second - first, m) == 0;
}

bool contained_in(const Subgroup& g, NamedGroupId id) {
  return std::all_of(g.elements().begin(), g.elements().end(),
                     [&](const Mat2& x) { return is_member(id, g.n(), x); });
}

Subgroup delta_flip(const Subgroup& delta) {
  std::vector<Mat2> flipped;
  flipped.reserve(delta.order());
  for (const Mat2& x : delta.elements()) {
    if (!x.is_diagonal()) {
      throw PreconditionError("delta_flip: non-diagonal element " + to_string(x));
    }
    flipped.push_back(Mat2::diag(x.modulus(), x.d(), x.a()));
  }
  return Subgroup::from_elements(delta.modulus(), std::move(flipped));
}

Subgroup diagonal_part(const Subgroup& g) {
  std::vector<Mat2> diag;
  diag.reserve(g.order());
  for (const Mat2& x : g.elements()) {
    if (x.c() != 0) throw PreconditionError("diagonal_part: " + to_string(x) + " is not in the Borel");
    diag.push_back(Mat2::diag(x.modulus(), x.a(), x.d()));
  }
  return Subgroup::from_elements(g.modulus(), std::move(diag));
}

}  // namespace gl2kit
