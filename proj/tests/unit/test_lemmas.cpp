#include <gtest/gtest.h>

#include <random>

#include "gl2kit/errors.hpp"
#include "gl2kit/harness.hpp"
#include "gl2kit/lemmas.hpp"

using namespace gl2kit;

namespace {

bool conjugates_into(const Subgroup& h, const Mat2& t, NamedGroupId id) {
  const Mat2 t_inv = mat_inv(t);
  for (const Mat2& x : h.elements()) {
    if (!is_member(id, h.n(), t_inv * x * t)) return false;
  }
  return true;
}

bool has_irrational_element(const Subgroup& h) {
  for (const Mat2& x : h.elements()) {
    if (eigenvalues(x).kind == EigenKind::IrrationalConjugatePair) return true;
  }
  return false;
}

Subgroup cyclic(const Mat2& x) { return closure(Modulus(x.modulus()), {x}); }

}  // namespace

TEST(DecomposeSL2, Examples) {
  const SL2Word u = decompose_sl2(Mat2::upper_unipotent(7));
  ASSERT_EQ(u.letters.size(), 1u);
  EXPECT_EQ(u.letters[0], (SL2Factor{SL2Letter::U, 1}));

  const SL2Word w = decompose_sl2(Mat2(5, 0, -1, 1, 0));
  const std::vector<SL2Factor> expected{{SL2Letter::U, 4}, {SL2Letter::Ut, 1}, {SL2Letter::U, 4}};
  EXPECT_EQ(w.letters, expected);
  EXPECT_EQ(w.evaluate(), Mat2(5, 0, -1, 1, 0));

  EXPECT_TRUE(decompose_sl2(Mat2::identity(5)).letters.empty());
  EXPECT_THROW(decompose_sl2(Mat2::diag(5, 2, 2)), PreconditionError);
}

TEST(DecomposeSL2, RoundTripsOnAllOfSL2) {
  for (const std::int64_t ell : {5, 7, 11, 13}) {
    const Subgroup sl = named_group(NamedGroupId::SL2, ell);
    for (const Mat2& x : sl.elements()) {
      const SL2Word w = decompose_sl2(x);
      ASSERT_EQ(w.evaluate(), x);
      ASSERT_LE(w.letters.size(), 8u);
      for (const SL2Factor& f : w.letters) {
        ASSERT_GE(f.exponent, 1);
        ASSERT_LT(f.exponent, ell);
      }
    }
  }
}

TEST(ConjugateIntoCartan, Examples) {
  const CartanEmbedding diag = conjugate_into_cartan(cyclic(Mat2::diag(5, 2, 3)));
  EXPECT_EQ(diag.conjugator, Mat2::identity(5));
  EXPECT_EQ(diag.target, CartanTarget::Split);

  const Subgroup ns = cyclic(Mat2(5, 0, 2, 1, 0));
  const CartanEmbedding e1 = conjugate_into_cartan(ns);
  EXPECT_EQ(e1.target, CartanTarget::Nonsplit);
  EXPECT_TRUE(conjugates_into(ns, e1.conjugator, NamedGroupId::NonsplitCartan));
  EXPECT_FALSE(e1.used_search_fallback);

  const Subgroup sp = cyclic(Mat2(5, 0, 1, 4, 0));
  const CartanEmbedding e2 = conjugate_into_cartan(sp);
  EXPECT_EQ(e2.target, CartanTarget::Split);
  EXPECT_TRUE(conjugates_into(sp, e2.conjugator, NamedGroupId::SplitCartan));
}

TEST(ConjugateIntoCartan, Errors) {
  EXPECT_THROW(conjugate_into_cartan(named_group(NamedGroupId::NormSplit, 5)), PreconditionError);
  EXPECT_THROW(conjugate_into_cartan(cyclic(Mat2::upper_unipotent(5))), PreconditionError);
}

TEST(ConjugateIntoCartan, EveryCyclicSubgroupOfGL2F11) {
  const std::vector<Mat2> all = gl2_elements(11);
  std::size_t checked = 0;
  for (const Mat2& x : cyclic_subgroup_generators(all)) {
    if (element_order(x) % 11 == 0) continue;
    const Subgroup h = cyclic(x);
    const CartanEmbedding e = conjugate_into_cartan(h);
    ASSERT_FALSE(e.used_search_fallback) << x;
    ASSERT_EQ(e.target == CartanTarget::Nonsplit, has_irrational_element(h)) << x;
    ASSERT_TRUE(conjugates_into(h, e.conjugator, named_group_of(e.target))) << x;
    ++checked;
  }
  EXPECT_GT(checked, 0u);
}

TEST(ConjugateIntoCartan, AgreesWithSearchOnRandomAbelianGroups) {
  std::mt19937_64 rng(17);
  for (const std::int64_t ell : {5, 7}) {
    const std::vector<Mat2> all = gl2_elements(ell);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    std::uniform_int_distribution<Residue> coef(0, ell - 1);
    int done = 0;
    while (done < 60) {
      const Mat2 x = all[pick(rng)];
      // <x, s I + t x> is abelian; retry until the second generator is invertible.
      const Residue s = coef(rng), t = coef(rng);
      const Mat2 z(ell, s + t * x.a(), t * x.b(), t * x.c(), s + t * x.d());
      if (!z.is_invertible()) continue;
      const Subgroup h = closure(Modulus(ell), {x, z});
      if (h.order() % static_cast<std::size_t>(ell) == 0) continue;
      const CartanEmbedding e = conjugate_into_cartan(h);
      const bool split_feasible = search_cartan_conjugator(h, CartanTarget::Split).has_value();
      const bool nonsplit_feasible = search_cartan_conjugator(h, CartanTarget::Nonsplit).has_value();
      ASSERT_TRUE(conjugates_into(h, e.conjugator, named_group_of(e.target)));
      ASSERT_TRUE(e.target == CartanTarget::Split ? split_feasible : nonsplit_feasible);
      // Split feasibility is decided by the eigenvalues alone.
      if (!has_irrational_element(h)) {
        ASSERT_TRUE(split_feasible);
      } else {
        ASSERT_FALSE(split_feasible);
      }
      ++done;
    }
  }
}

TEST(CyclicGenerator, Examples) {
  const Subgroup trivial = closure(Modulus(11), std::vector<Mat2>{});
  EXPECT_EQ(cyclic_generator(trivial), Mat2::identity(11));
  const Mat2 g = Mat2::diag(11, 4, 3);  // diag(alpha^2, alpha^-2), alpha = 2
  EXPECT_EQ(element_order(g), 5u);
  EXPECT_EQ(cyclic_generator(cyclic(g)), g);
  EXPECT_THROW(cyclic_generator(cyclic(Mat2::diag(11, 2, 1))), PreconditionError);
  EXPECT_THROW(cyclic_generator(cyclic(Mat2::scalar(11, -1))), PreconditionError);
  EXPECT_THROW(cyclic_generator(cyclic(Mat2::upper_unipotent(11))), PreconditionError);
}

TEST(CyclicGenerator, OddOrderSubgroupsOfSL2F11AreCyclic) {
  std::vector<Mat2> odd;
  const Subgroup sl = named_group(NamedGroupId::SL2, 11);
  for (const Mat2& x : sl.elements()) {
    const std::uint64_t k = element_order(x);
    if (k % 2 == 1 && k % 11 != 0) odd.push_back(x);
  }
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<std::size_t> pick(0, odd.size() - 1);
  std::size_t checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const Subgroup h = closure(Modulus(11), {odd[pick(rng)], odd[pick(rng)]});
    if (h.order() % 2 == 0 || h.order() % 11 == 0) continue;
    const Mat2 g = cyclic_generator(h);
    ASSERT_EQ(cyclic(g), h);
    ++checked;
  }
  EXPECT_GT(checked, 20u);
}

TEST(Normalizer, Examples) {
  EXPECT_EQ(normalizer_in_gl2(named_group(NamedGroupId::SplitCartan, 5)), named_group(NamedGroupId::NormSplit, 5));
  EXPECT_EQ(normalizer_in_gl2(named_group(NamedGroupId::NonsplitCartan, 5)),
            named_group(NamedGroupId::NormNonsplit, 5));
  EXPECT_EQ(normalizer_in_gl2(closure(Modulus(5), std::vector<Mat2>{})).order(), 480u);
  EXPECT_THROW(normalizer_in_gl2(named_group(NamedGroupId::SplitCartan, 17)), ResourceError);
}

TEST(Normalizer, CartanSubgroupsLandInNormalizers) {
  for (const std::int64_t ell : {5, 7, 11}) {
    for (const auto [cartan, norm] : {std::pair{NamedGroupId::SplitCartan, NamedGroupId::NormSplit},
                                      std::pair{NamedGroupId::NonsplitCartan, NamedGroupId::NormNonsplit}}) {
      for (const Mat2& x : cyclic_subgroup_generators(named_group(cartan, ell).elements())) {
        if (x.is_scalar()) continue;
        const Subgroup h = cyclic(x);
        const Subgroup n = normalizer_in_gl2(h);
        ASSERT_TRUE(is_subgroup_of(h, n));
        ASSERT_TRUE(contained_in(n, norm)) << x;
      }
    }
  }
}

TEST(ConjugateIntoNormalizer, Examples) {
  const CartanEmbedding cs = conjugate_into_normalizer(named_group(NamedGroupId::SplitCartan, 7));
  EXPECT_EQ(cs.target, CartanTarget::NormSplit);
  EXPECT_EQ(cs.conjugator, Mat2::identity(7));

  const Subgroup h = cyclic(Mat2(5, 0, 2, 1, 0));
  const CartanEmbedding e = conjugate_into_normalizer(h);
  EXPECT_EQ(e.target, CartanTarget::NormNonsplit);
  EXPECT_TRUE(conjugates_into(h, e.conjugator, NamedGroupId::NormNonsplit));

  const Subgroup scalar = cyclic(Mat2::scalar(7, 3));
  const CartanEmbedding s = conjugate_into_normalizer(scalar);
  EXPECT_TRUE(conjugates_into(scalar, s.conjugator, named_group_of(s.target)));

  EXPECT_THROW(conjugate_into_normalizer(named_group(NamedGroupId::SL2, 5)), PreconditionError);
}

TEST(ConjugateIntoNormalizer, HoldsOnTwoGeneratedSubgroupsOfGL2F5) {
  std::size_t checked = 0;
  for (const Subgroup& h : two_generated_subgroups_up_to_conjugacy(5)) {
    CartanEmbedding e{Mat2::identity(5), CartanTarget::Split, false};
    try {
      e = conjugate_into_normalizer(h);
    } catch (const PreconditionError&) {
      continue;
    }
    ASSERT_TRUE(e.target == CartanTarget::NormSplit || e.target == CartanTarget::NormNonsplit);
    ASSERT_TRUE(conjugates_into(h, e.conjugator, named_group_of(e.target)));
    ++checked;
  }
  EXPECT_GT(checked, 10u);
}
