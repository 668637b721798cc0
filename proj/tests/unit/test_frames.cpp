#include <algorithm>
#include <set>

#include "doctest.h"

#include "cbpd/errors.hpp"
#include "cbpd/frames.hpp"
#include "cbpd/providers.hpp"
#include "support.hpp"

using namespace cbpd;
using cbpd::testing::all_subsets;
using cbpd::testing::non_ep_family;
using cbpd::testing::random_poset;

namespace {

// Σ(τ) by joining every non-empty subset of τ.
std::set<Element> sigma_oracle(const FinitePoset& p, const ElementSet& tau) {
  std::set<Element> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << tau.size()); ++mask) {
    if (auto j = p.join_of(tau.select(mask))) out.insert(*j);
  }
  return out;
}

// Eq. (2) over every subset of Σ(τ), not just pairs.
bool frame_oracle(const FinitePoset& p, const ElementSet& tau) {
  if (!p.is_antichain(tau)) return false;
  auto sig = sigma_oracle(p, tau);
  ElementSet s(std::vector<Element>(sig.begin(), sig.end()));
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s.size()); ++mask) {
    auto sub = s.select(mask);
    if (p.lower_bounds(sub).none()) continue;
    auto m = p.meet_of(sub);
    if (!m || !sig.count(*m)) return false;
  }
  return true;
}

bool p1_oracle(const FinitePoset& p, const ElementSet& sigma, const ElementSet& tau) {
  auto sig = sigma_oracle(p, tau);
  return std::all_of(sigma.begin(), sigma.end(), [&](Element x) { return sig.count(x) > 0; });
}

bool p2_oracle(const FinitePoset& p, const ElementSet& sigma, const ElementSet& tau) {
  for (Element t : tau) {
    std::size_t above = 0;
    for (Element x : sigma) above += p.leq(t, x);
    if (above > 1) return false;
  }
  return true;
}

bool p3_oracle(const FinitePoset& p, const ElementSet& sigma, const ElementSet& tau) {
  return std::all_of(tau.begin(), tau.end(), [&](Element t) {
    return std::any_of(sigma.begin(), sigma.end(), [&](Element x) { return p.leq(t, x); });
  });
}

void check_against_oracle(const FrameFamily& fam) {
  const auto& p = fam.poset();
  std::vector<ElementSet> pd;
  std::vector<ElementSet> d;
  std::vector<ElementSet> cb;
  for (const auto& s : all_subsets(p.size())) {
    bool in_pd = false;
    bool in_d = false;
    bool in_cb = false;
    for (const auto& tau : fam.frames()) {
      if (!p1_oracle(p, s, tau)) continue;
      in_cb = true;
      if (p2_oracle(p, s, tau)) {
        in_pd = true;
        in_d = in_d || p3_oracle(p, s, tau);
      }
    }
    if (in_pd) pd.push_back(s);
    if (in_d) d.push_back(s);
    CHECK(build_CB(fam).contains_face(s) == in_cb);
    if (in_cb) cb.push_back(s);
  }
  canonicalize(pd);
  canonicalize(d);
  CHECK(build_PD(fam).members() == pd);
  CHECK(build_D(fam).members() == d);
}

std::vector<ElementSet> random_valid_frames(Rng& rng, const FinitePoset& p) {
  std::vector<ElementSet> frames;
  for (int attempt = 0; attempt < 30; ++attempt) {
    std::vector<Element> t;
    for (Element x = 0; x < p.size(); ++x) {
      if (rng.below(3) == 0) t.push_back(x);
    }
    if (t.empty()) continue;
    ElementSet tau(t);
    if (validate_frame(p, tau).valid) frames.push_back(tau);
  }
  canonicalize(frames);
  return frames;
}

Element by_label(const FinitePoset& p, const std::string& label) {
  for (Element x = 0; x < p.size(); ++x) {
    if (p.label(x) == label) return x;
  }
  FAIL("no element labelled " << label);
  return 0;
}

}  // namespace

TEST_CASE("sigma examples") {
  auto gf = subspace_provider(2, 2);
  CHECK(sigma_of(*gf.poset, {0, 1}) == ElementSet{0, 1});
  auto boolean = matroid_provider(MatroidSpec::free(6));
  CHECK(sigma_of(*boolean.poset, boolean.family->frame(0)).size() == 62);
  auto sp = symplectic_provider(2, 2);
  for (std::size_t i = 0; i < sp.family->size(); ++i) {
    CHECK(sp.family->frame(i).size() == 4);
    CHECK(sp.family->sigma(i).size() == 8);
  }
}

TEST_CASE("validate_frame examples") {
  auto gf = subspace_provider(2, 2);
  CHECK(validate_frame(*gf.poset, {0, 1}).valid);
  auto chain = FinitePoset::from_covers(2, {{0, 1}});
  auto v = validate_frame(chain, {0, 1});
  CHECK_FALSE(v.valid);
  REQUIRE(v.witness);
  CHECK(*v.witness == std::pair<Element, Element>{0, 1});
  auto syn = FinitePoset::from_covers(4, {{0, 2}});
  CHECK(validate_frame(syn, {0, 1}).valid);
  CHECK(validate_frame(syn, {2, 3}).valid);
}

TEST_CASE("a frame whose sigma misses a meet is rejected") {
  // 0,1 below both 2 and 3; frame {2,3} has Σ = {2,3}, and {2,3} has lower bounds but no meet.
  auto p = FinitePoset::from_covers(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  auto v = validate_frame(p, {2, 3});
  CHECK_FALSE(v.valid);
  CHECK_FALSE(frame_oracle(p, {2, 3}));
  CHECK_THROWS_AS(FrameFamily(std::make_shared<const FinitePoset>(p), {{2, 3}}), InvalidFrameError);
}

TEST_CASE("pairwise frame validation matches the all-subsets oracle") {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + rng.below(8);
    auto p = random_poset(rng, n, 2 + rng.below(3));
    for (const auto& tau : all_subsets(n)) {
      if (tau.size() > 5) continue;
      const auto sig = sigma_oracle(p, tau);
      CHECK(sigma_of(p, tau) == ElementSet(std::vector<Element>(sig.begin(), sig.end())));
      if (sig.size() > 12) continue;
      CHECK(validate_frame(p, tau).valid == frame_oracle(p, tau));
    }
  }
}

TEST_CASE("properties examples") {
  auto gf = subspace_provider(2, 2);
  const auto& p = *gf.poset;
  CHECK(check_properties(p, {0, 1}, {0, 1}) == Properties{true, true, true});
  CHECK_FALSE(check_properties(p, {2}, {0, 1}).p1);
  auto boolean = matroid_provider(MatroidSpec::free(6));
  auto e = [&](std::initializer_list<Element> s) { return *boolean.element_of(ElementSet(s)); };
  auto props = check_properties(*boolean.poset, ElementSet{e({0, 1}), e({1, 2})}, boolean.family->frame(0));
  CHECK(props.p1);
  CHECK_FALSE(props.p2);
}

TEST_CASE("properties match the definitions on random frames") {
  Rng rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + rng.below(7);
    auto p = random_poset(rng, n);
    auto frames = random_valid_frames(rng, p);
    for (const auto& tau : frames) {
      for (const auto& s : all_subsets(n)) {
        auto got = check_properties(p, s, tau);
        CHECK(got.p1 == p1_oracle(p, s, tau));
        CHECK(got.p2 == p2_oracle(p, s, tau));
        CHECK(got.p3 == p3_oracle(p, s, tau));
      }
    }
  }
}

TEST_CASE("D, PD and CB sizes") {
  auto gf2 = subspace_provider(2, 2);
  auto d = build_D(*gf2.family);
  CHECK(d.members() == std::vector<ElementSet>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(build_PD(*gf2.family).size() == 6);
  CHECK(build_CB(*gf2.family).facets() == std::vector<ElementSet>{{0, 1}, {0, 2}, {1, 2}});
  auto gf3 = subspace_provider(3, 2);
  CHECK(build_CB(*gf3.family).facets().size() == 6);
  CHECK(build_CB(*gf3.family).num_vertices() == 4);

  auto gf = subspace_provider(2, 3);
  const auto& p = *gf.poset;
  auto pd = build_PD(*gf.family);
  auto dd = build_D(*gf.family);
  CHECK(dd.size() == 56);
  CHECK(pd.size() == 91);
  std::size_t triples = 0;
  std::size_t line_plane = 0;
  for (const auto& s : dd.members()) {
    triples += s.size() == 3;
    line_plane += s.size() == 2 && p.height_of(s[0]) != p.height_of(s[1]);
  }
  CHECK(triples == 28);
  CHECK(line_plane == 28);
  auto cb = build_CB(*gf.family);
  CHECK(cb.facets().size() == 28);
  CHECK(cb.dimension() == 5);
}

TEST_CASE("Boolean frame on three atoms gives the partition lattice") {
  auto b = matroid_provider(MatroidSpec::free(3));
  auto d = build_D(*b.family);
  // The proper part of Π_3 minus its top: the bottom {1,2,3} and the three two-block partitions.
  CHECK(d.size() == 4);
  CHECK(d.order().minimal_elements().size() == 1);
  CHECK(d.dimension() == 1);
}

TEST_CASE("builders match the brute-force oracle") {
  check_against_oracle(*subspace_provider(2, 2).family);
  check_against_oracle(*subspace_provider(3, 2).family);
  check_against_oracle(*subspace_provider(2, 3).family);
  check_against_oracle(*matroid_provider(MatroidSpec::free(3)).family);
  check_against_oracle(*matroid_provider(MatroidSpec::free(4)).family);
  check_against_oracle(*matroid_provider(MatroidSpec::uniform(4, 2)).family);
  check_against_oracle(*symplectic_provider(2, 1).family);
  check_against_oracle(non_ep_family());
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto p = std::make_shared<const FinitePoset>(random_poset(rng, 3 + rng.below(7)));
    auto frames = random_valid_frames(rng, *p);
    if (frames.empty()) continue;
    check_against_oracle(FrameFamily(p, frames));
  }
}

TEST_CASE("frames, subsets and the D/PD relationship") {
  for (const auto& inst : {Instance(subspace_provider(2, 3)), Instance(matroid_provider(MatroidSpec::uniform(5, 3))),
                           Instance(symplectic_provider(2, 2))}) {
    const auto& fam = *inst.family;
    auto pd = build_PD(fam);
    auto d = build_D(fam);
    auto cb = build_CB(fam);
    for (const auto& tau : fam.frames()) {
      CHECK(d.contains(tau));
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << tau.size()); ++mask) {
        CHECK(pd.contains(tau.select(mask)));
      }
    }
    for (const auto& s : d.members()) {
      CHECK(pd.contains(s));
      CHECK(fam.is_decomposition(s));
    }
    for (const auto& s : pd.members()) {
      CHECK(cb.contains_face(s));
      CHECK(fam.is_decomposition(s) == d.contains(s));
    }
  }
}

TEST_CASE("refinement order") {
  auto gf = subspace_provider(2, 3);
  const auto& p = *gf.poset;
  auto pd = build_PD(*gf.family);
  for (std::size_t i = 0; i < pd.size(); ++i) {
    for (std::size_t j = 0; j < pd.size(); ++j) {
      const auto& a = pd.member(i);
      const auto& b = pd.member(j);
      bool expect = std::all_of(a.begin(), a.end(), [&](Element x) {
        return std::any_of(b.begin(), b.end(), [&](Element y) { return p.leq(x, y); });
      });
      CHECK(pd.order().leq(static_cast<Element>(i), static_cast<Element>(j)) == expect);
    }
  }
}

TEST_CASE("subspace frames have Boolean sigma") {
  for (auto [q, n] : {std::pair{2u, 2u}, {3u, 2u}, {2u, 3u}}) {
    auto gf = subspace_provider(q, n);
    for (std::size_t i = 0; i < gf.family->size(); ++i) {
      CHECK(gf.family->sigma_is_boolean(i));
      CHECK(gf.family->sigma(i).size() == (std::size_t{1} << n) - 2);
    }
  }
}

TEST_CASE("EP holds on the subspace and uniform instances") {
  for (const auto& inst : {Instance(subspace_provider(2, 3)), Instance(matroid_provider(MatroidSpec::uniform(4, 2))),
                           Instance(symplectic_provider(2, 1)), Instance(matroid_provider(MatroidSpec::free(4)))}) {
    auto r = check_EP(*inst.family, build_PD(*inst.family));
    CHECK(r.holds);
    CHECK(r.checked > 0);
  }
}

TEST_CASE("EP fails on the synthetic poset") {
  auto fam = non_ep_family();
  auto r = check_EP(fam, build_PD(fam));
  CHECK_FALSE(r.holds);
  REQUIRE(r.witness);
  CHECK(r.witness->first == ElementSet{0});
  CHECK(r.witness->second == ElementSet{2});
}

TEST_CASE("EP fails on symplectic GF(2)^4, re-derived by brute force") {
  auto sp = symplectic_provider(2, 2);
  const auto& p = *sp.poset;
  const auto& fam = *sp.family;
  auto pd = build_PD(fam);
  auto r = check_EP(fam, pd);
  CHECK_FALSE(r.holds);

  const ElementSet sigma{by_label(p, "1000")};
  const ElementSet coarser{by_label(p, "1010"), by_label(p, "1011"), by_label(p, "1000|0100")};
  CHECK(pd.contains(sigma));
  CHECK(pd.contains(coarser));
  CHECK(refines(p, sigma, coarser));
  std::size_t coarse_frames = 0;
  for (const auto& tau : fam.frames()) {
    const bool a = p1_oracle(p, sigma, tau) && p2_oracle(p, sigma, tau);
    const bool b = p1_oracle(p, coarser, tau) && p2_oracle(p, coarser, tau);
    coarse_frames += b;
    CHECK_FALSE((p1_oracle(p, sigma, tau) && p1_oracle(p, coarser, tau)));
    CHECK_FALSE((a && b));
  }
  CHECK(coarse_frames == 1);
}

TEST_CASE("dimension report") {
  auto check = [](const Instance& inst, int cb, int pd, int d, std::size_t m) {
    const auto& fam = *inst.family;
    auto pds = build_PD(fam);
    const bool ep = check_EP(fam, pds).holds;
    auto r = dimension_report(fam, build_CB(fam), pds, build_D(fam), ep);
    CHECK(r.dim_cb == cb);
    CHECK(r.dim_pd == pd);
    CHECK(r.dim_d == d);
    CHECK(r.m == m);
    for (const auto& c : r.checks) CHECK_MESSAGE(c.status != CheckStatus::fail, c.name);
    for (const auto& c : closed_form_checks(inst, r)) CHECK_MESSAGE(c.status == CheckStatus::pass, c.name);
    return r;
  };
  check(subspace_provider(2, 3), 5, 3, 1, 3);
  check(matroid_provider(MatroidSpec::uniform(4, 2)), 1, 1, 0, 2);
  auto sp = check(symplectic_provider(2, 2), 7, 5, 2, 4);
  CHECK_FALSE(sp.ep);
  CHECK(std::any_of(sp.checks.begin(), sp.checks.end(),
                    [](const DimensionCheck& c) { return c.status == CheckStatus::not_applicable; }));
}

TEST_CASE("height additivity") {
  for (const auto& inst : {Instance(subspace_provider(2, 2)), Instance(subspace_provider(3, 2)),
                           Instance(subspace_provider(2, 3)), Instance(matroid_provider(MatroidSpec::free(4))),
                           Instance(matroid_provider(MatroidSpec::uniform(5, 3))),
                           Instance(symplectic_provider(2, 2))}) {
    auto r = check_height_additivity(*inst.family, build_PD(*inst.family));
    CHECK_MESSAGE(r.ok, inst.name);
  }
}

TEST_CASE("degenerate single-element family") {
  auto p = std::make_shared<const FinitePoset>(FinitePoset::from_covers(1, {}));
  FrameFamily fam(p, {{0}});
  CHECK(build_CB(fam).facets() == std::vector<ElementSet>{{0}});
  CHECK(build_PD(fam).size() == 1);
  CHECK(build_D(fam).size() == 1);
}

TEST_CASE("family validation") {
  auto p = std::make_shared<const FinitePoset>(FinitePoset::from_covers(2, {{0, 1}}));
  CHECK_THROWS_AS(FrameFamily(p, {{0, 1}}), InvalidFrameError);
  CHECK_THROWS_AS(FrameFamily(p, {}), InputError);
}
