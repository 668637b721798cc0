#include <algorithm>

#include "doctest.h"

#include "cbpd/equivalence.hpp"
#include "cbpd/errors.hpp"
#include "cbpd/providers.hpp"
#include "support.hpp"

using namespace cbpd;
using cbpd::testing::non_ep_family;
using cbpd::testing::random_poset;

namespace {

// free(6) with elements named by their ground digits 1..6: "12" is the flat {e1,e2}.
struct Free6 {
  MatroidInstance inst = matroid_provider(MatroidSpec::free(6));
  Element operator()(const std::string& digits) const {
    std::vector<Element> s;
    for (char c : digits) s.push_back(static_cast<Element>(c - '1'));
    return *inst.element_of(ElementSet(s));
  }
  ElementSet set(std::initializer_list<const char*> names) const {
    std::vector<Element> out;
    for (const char* n : names) out.push_back((*this)(n));
    return ElementSet(out);
  }
};

// All meets of non-empty subsets, by enumeration.
ElementSet closure_oracle(const FinitePoset& p, const ElementSet& s) {
  std::vector<Element> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s.size()); ++mask) {
    if (auto m = p.meet_of(s.select(mask))) out.push_back(*m);
  }
  return ElementSet(out);
}

}  // namespace

TEST_CASE("worked example on free(6)") {
  Free6 e;
  const auto& fam = *e.inst.family;
  const auto& p = *e.inst.poset;
  const auto s0 = e.set({"1", "12", "23", "45"});
  const auto s1 = e.set({"1", "12", "23", "234", "45", "6"});
  CHECK(closure(p, s0) == e.set({"1", "12", "2", "23", "45"}));
  ChainInPoset c{{s0, s1}};
  validate_cb_chain(fam, c);
  CHECK(map_m(fam, c) == e.set({"1", "2", "45", "6"}));

  // s0 holds <e1> < <e1,e2>, so it is not a partial decomposition and u is undefined on c.
  CHECK_THROWS_AS(map_u(fam, c), InputError);
  ChainInPoset d{{e.set({"1", "23"}), e.set({"1", "234"})}};
  auto u = map_u(fam, d);
  CHECK(u.set == e.set({"1", "23", "234"}));
  CHECK(u.is_face);
}

TEST_CASE("closure examples and laws") {
  Free6 e;
  const auto& p = *e.inst.poset;
  CHECK(closure(p, {e("12")}) == ElementSet{e("12")});
  auto anti = FinitePoset::from_covers(3, {});
  CHECK(closure(anti, {0, 1, 2}) == ElementSet{0, 1, 2});
  CHECK_THROWS_AS(closure(p, {}), InputError);

  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Element> s;
    const std::size_t k = 1 + rng.below(6);
    for (std::size_t i = 0; i < k; ++i) s.push_back(static_cast<Element>(rng.below(p.size())));
    ElementSet sigma(s);
    auto cl = closure(p, sigma);
    CHECK(cl.includes(sigma));
    CHECK(closure(p, cl) == cl);
    CHECK(cl == closure_oracle(p, sigma));
  }
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + rng.below(8);
    auto q = random_poset(rng, n, 2);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); mask += 1 + rng.below(5)) {
      std::vector<Element> s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1) s.push_back(static_cast<Element>(i));
      }
      ElementSet sigma(s);
      if (sigma.size() > 8) continue;
      CHECK(closure(q, sigma) == closure_oracle(q, sigma));
    }
  }
}

TEST_CASE("closure keeps P1 and fixes partial decompositions") {
  for (const auto& inst : {Instance(subspace_provider(2, 3)), Instance(matroid_provider(MatroidSpec::free(4))),
                           Instance(matroid_provider(MatroidSpec::uniform(5, 3)))}) {
    const auto& fam = *inst.family;
    const auto& p = fam.poset();
    auto pd = build_PD(fam);
    for (const auto& s : pd.members()) CHECK(closure(p, s) == s);
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const auto& sig = fam.sigma(i);
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << std::min<std::size_t>(sig.size(), 14)); mask += 7) {
        auto s = sig.select(mask);
        CHECK(fam.properties(closure(p, s), i).p1);
      }
    }
  }
}

TEST_CASE("map m examples") {
  auto gf = subspace_provider(2, 3);
  const auto& fam = *gf.family;
  CHECK(map_m(fam, ChainInPoset{{{4}}}) == ElementSet{4});
  auto pd = build_PD(fam);
  for (const auto& s : pd.members()) CHECK(map_m(fam, ChainInPoset{{s}}) == s);
}

TEST_CASE("map u examples") {
  auto gf = subspace_provider(2, 2);
  auto u = map_u(*gf.family, ChainInPoset{{{1}}});
  CHECK(u.set == ElementSet{1});
  CHECK(u.is_face);

  auto fam = non_ep_family();
  ChainInPoset c{{{0}, {2}}};
  validate_pd_chain(fam, c);
  auto bad = map_u(fam, c);
  CHECK(bad.set == ElementSet{0, 2});
  CHECK_FALSE(bad.is_face);
}

TEST_CASE("chain validation") {
  auto gf = subspace_provider(2, 2);
  const auto& fam = *gf.family;
  CHECK_THROWS_AS(validate_cb_chain(fam, ChainInPoset{{{0, 1, 2}}}), InputError);
  CHECK_THROWS_AS(validate_cb_chain(fam, ChainInPoset{{{0, 1}, {0}}}), InputError);
  CHECK_THROWS_AS(validate_cb_chain(fam, ChainInPoset{}), InputError);
  CHECK_THROWS_AS(map_m(fam, ChainInPoset{{{0, 1, 2}}}), InputError);
  CHECK_THROWS_AS(validate_pd_chain(fam, ChainInPoset{{{0, 1}, {0}}}), InputError);
  CHECK_THROWS_AS(map_u(fam, ChainInPoset{{{0, 1}, {0, 1}}}), InputError);
}

TEST_CASE("m lands in PD and is monotone") {
  auto small = subspace_provider(2, 2);
  auto r = check_m_in_pd(*small.family, build_PD(*small.family));
  CHECK(r.ok);
  // 6 vertex chains, plus 6 edge chains each checked alone and against both one-link sub-chains
  CHECK(r.checked == 24);
  auto gf = subspace_provider(2, 3);
  auto s = check_m_in_pd(*gf.family, build_PD(*gf.family), SampleSpec{10'000, 0xC0FFEE});
  CHECK(s.ok);
  CHECK(s.checked == 10'000);
  auto b = matroid_provider(MatroidSpec::free(4));
  CHECK(check_m_in_pd(*b.family, build_PD(*b.family), SampleSpec{2'000, 5}).ok);
}

TEST_CASE("u is total exactly on EP instances") {
  for (const auto& inst : {Instance(subspace_provider(2, 2)), Instance(subspace_provider(3, 2)),
                           Instance(subspace_provider(2, 3)), Instance(matroid_provider(MatroidSpec::free(3))),
                           Instance(matroid_provider(MatroidSpec::uniform(5, 3))),
                           Instance(symplectic_provider(2, 1))}) {
    auto pd = build_PD(*inst.family);
    REQUIRE(check_EP(*inst.family, pd).holds);
    CHECK_MESSAGE(check_u_total(*inst.family, pd).ok, inst.name);
    CHECK(check_u_total(*inst.family, pd, SampleSpec{2'000, 9}).ok);
  }
  auto fam = non_ep_family();
  auto r = check_u_total(fam, build_PD(fam));
  CHECK_FALSE(r.ok);
  REQUIRE(r.witness);
  CHECK_FALSE(map_u(fam, *r.witness).is_face);
}

TEST_CASE("composite bounds") {
  auto gf2 = subspace_provider(2, 2);
  auto r = verify_composite_bounds(*gf2.family, build_PD(*gf2.family));
  CHECK(r.exhaustive);
  CHECK(r.ok());
  CHECK(r.checked_cb > 0);
  CHECK(r.checked_pd > 0);
  auto f3 = matroid_provider(MatroidSpec::free(3));
  CHECK(verify_composite_bounds(*f3.family, build_PD(*f3.family)).exhaustive);
  CHECK(verify_composite_bounds(*f3.family, build_PD(*f3.family)).ok());
  auto gf = subspace_provider(2, 3);
  auto s = verify_composite_bounds(*gf.family, build_PD(*gf.family), SampleSpec{10'000, 0xC0FFEE});
  CHECK_FALSE(s.exhaustive);
  CHECK(s.seed == 0xC0FFEE);
  CHECK(s.ok());
  CHECK(s.checked_cb == 10'000);
  CHECK(s.checked_pd == 10'000);
}

TEST_CASE("sampled checks are reproducible") {
  auto gf = subspace_provider(2, 3);
  auto pd = build_PD(*gf.family);
  auto a = verify_composite_bounds(*gf.family, pd, SampleSpec{500, 77});
  auto b = verify_composite_bounds(*gf.family, pd, SampleSpec{500, 77});
  CHECK(a.checked_cb == b.checked_cb);
  CHECK(a.violations == b.violations);
}

TEST_CASE("trivial chain of chains meets the bound with equality") {
  auto gf = subspace_provider(2, 2);
  const auto& fam = *gf.family;
  ChainInPoset c{{{0}}};
  auto m = map_m(fam, c);
  CHECK(m == ElementSet{0});
  CHECK(map_u(fam, ChainInPoset{{m}}).set == closure(fam.poset(), {0}));
}

TEST_CASE("induced maps are homology isomorphisms") {
  auto gf2 = subspace_provider(2, 2);
  auto pd2 = build_PD(*gf2.family);
  auto u = induced_homology_iso(*gf2.family, pd2, InducedMap::u);
  CHECK(u.iso);
  REQUIRE(u.degrees.size() >= 2);
  CHECK(u.degrees[1].rank_map == 1);

  auto gf3 = subspace_provider(3, 2);
  auto m = induced_homology_iso(*gf3.family, build_PD(*gf3.family), InducedMap::m);
  CHECK(m.iso);
  CHECK(m.degrees[1].rank_map == 3);

  auto pt = std::make_shared<const FinitePoset>(FinitePoset::from_covers(1, {}));
  FrameFamily one(pt, {{0}});
  CHECK(induced_homology_iso(one, build_PD(one), InducedMap::u).iso);
  CHECK(induced_homology_iso(one, build_PD(one), InducedMap::m).iso);

  auto f3 = matroid_provider(MatroidSpec::free(3));
  CHECK(induced_homology_iso(*f3.family, build_PD(*f3.family), InducedMap::u).iso);
  auto u42 = matroid_provider(MatroidSpec::uniform(4, 2));
  auto um = induced_homology_iso(*u42.family, build_PD(*u42.family), InducedMap::m);
  CHECK(um.iso);
  CHECK(um.degrees[1].rank_map == 3);
}

TEST_CASE("induced map budget and undefined maps") {
  auto gf = subspace_provider(2, 3);
  CHECK_THROWS_AS(induced_homology_iso(*gf.family, build_PD(*gf.family), InducedMap::m, 100), ResourceError);
  auto fam = non_ep_family();
  CHECK_THROWS_AS(induced_homology_iso(fam, build_PD(fam), InducedMap::u), InputError);
}
