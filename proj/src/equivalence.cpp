#include "cbpd/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <unordered_map>

#include "cbpd/errors.hpp"
#include "cbpd/random.hpp"

namespace cbpd {

ElementSet closure(const FinitePoset& poset, const ElementSet& sigma) {
  if (sigma.empty()) throw InputError("closure of the empty set");
  // Each meet is the greatest element of an intersection of down-sets; walk
  // all distinct intersections reachable from single members.
  std::set<Bitset> seen;
  std::vector<Bitset> frontier;
  for (Element x : sigma) {
    if (seen.insert(poset.down_set(x)).second) frontier.push_back(poset.down_set(x));
  }
  while (!frontier.empty()) {
    const Bitset s = std::move(frontier.back());
    frontier.pop_back();
    for (Element x : sigma) {
      Bitset t = s & poset.down_set(x);
      if (t.any() && seen.insert(t).second) frontier.push_back(std::move(t));
    }
  }
  std::vector<Element> meets;
  for (const auto& s : seen) {
    if (auto g = poset.greatest_of(s)) meets.push_back(*g);
  }
  return ElementSet(std::move(meets));
}

void validate_cb_chain(const FrameFamily& family, const ChainInPoset& chain) {
  if (chain.links.empty()) throw InputError("empty chain");
  for (std::size_t i = 0; i < chain.links.size(); ++i) {
    const auto& link = chain.links[i];
    if (link.empty() || !family.is_basis_compatible(link)) {
      throw InputError("chain link " + link.to_string() + " is not a face of CB");
    }
    if (i > 0 && (link.size() <= chain.links[i - 1].size() || !link.includes(chain.links[i - 1]))) {
      throw InputError("chain links " + chain.links[i - 1].to_string() + " and " +
                       link.to_string() + " are not strictly nested");
    }
  }
}

void validate_pd_chain(const FrameFamily& family, const ChainInPoset& chain) {
  if (chain.links.empty()) throw InputError("empty chain");
  for (std::size_t i = 0; i < chain.links.size(); ++i) {
    const auto& link = chain.links[i];
    if (!family.is_partial_decomposition(link)) {
      throw InputError("chain link " + link.to_string() + " is not a partial decomposition");
    }
    if (i > 0 && (link == chain.links[i - 1] ||
                  !refines(family.poset(), chain.links[i - 1], link))) {
      throw InputError("chain links " + chain.links[i - 1].to_string() + " and " +
                       link.to_string() + " are not strictly increasing");
    }
  }
}

namespace {

ElementSet min_closure(const FinitePoset& poset, const ElementSet& sigma) {
  return poset.extreme_elements(closure(poset, sigma), Extreme::min);
}

ElementSet unite_all(const std::vector<ElementSet>& sets) {
  std::vector<Element> all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  return ElementSet(std::move(all));
}

ElementSet max_of_union(const FinitePoset& poset, const std::vector<ElementSet>& sets) {
  return poset.extreme_elements(unite_all(sets), Extreme::max);
}

// Memoized min(Cl(σ)) for the faces met during one verification run.
class MinClosureCache {
 public:
  explicit MinClosureCache(const FinitePoset& poset) : poset_(poset) {}
  const ElementSet& operator()(const ElementSet& sigma) {
    auto it = cache_.find(sigma);
    if (it == cache_.end()) it = cache_.emplace(sigma, min_closure(poset_, sigma)).first;
    return it->second;
  }

 private:
  const FinitePoset& poset_;
  std::unordered_map<ElementSet, ElementSet, ElementSetHash> cache_;
};

ElementSet m_of_links(const FinitePoset& poset, MinClosureCache& mins,
                      const std::vector<ElementSet>& links) {
  std::vector<ElementSet> parts;
  parts.reserve(links.size());
  for (const auto& l : links) parts.push_back(mins(l));
  return max_of_union(poset, parts);
}

// Faces of a complex numbered globally, dimension by dimension, matching the
// vertex ids of barycentric_subdivision.
class FaceNumbering {
 public:
  explicit FaceNumbering(const SimplicialComplex& complex, std::size_t budget = 60'000'000)
      : index_(complex, budget) {
    offset_.assign(static_cast<std::size_t>(index_.dimension()) + 2, 0);
    for (int k = 0; k <= index_.dimension(); ++k) offset_[k + 1] = offset_[k] + index_.count(k);
  }
  std::size_t total() const { return offset_.back(); }
  const FaceIndex& index() const { return index_; }
  std::span<const Vertex> face(std::size_t global) const {
    const auto k = static_cast<int>(std::upper_bound(offset_.begin(), offset_.end(), global) -
                                    offset_.begin()) - 1;
    return index_.face(k, global - offset_[k]);
  }
  ElementSet face_set(std::size_t global) const {
    auto f = face(global);
    return ElementSet::from_sorted(std::vector<Element>(f.begin(), f.end()));
  }
  std::optional<std::size_t> global(std::span<const Vertex> f) const {
    auto local = index_.index_of(f);
    if (!local) return std::nullopt;
    return offset_[f.size() - 1] + *local;
  }

 private:
  FaceIndex index_;
  std::vector<std::size_t> offset_;
};

std::vector<ElementSet> links_of(const FaceNumbering& cb, std::span<const Vertex> chain) {
  std::vector<ElementSet> links;
  for (Vertex v : chain) links.push_back(cb.face_set(v));
  return links;
}

// Links of a chain of PD members listed by index, sorted bottom to top.
std::vector<ElementSet> pd_links(const DecompositionPoset& pd, std::vector<Element> chain) {
  std::sort(chain.begin(), chain.end(), [&](Element a, Element b) { return pd.order().less(a, b); });
  std::vector<ElementSet> links;
  for (Element i : chain) links.push_back(pd.member(i));
  return links;
}

std::vector<Element> random_flag(Rng& rng, const SimplicialComplex& cb, const FaceNumbering* numbering,
                                 std::vector<ElementSet>& links) {
  const auto& facet = cb.facets()[rng.below(cb.facets().size())];
  std::vector<Element> order(facet.begin(), facet.end());
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  links.clear();
  std::vector<Element> prefix;
  std::vector<Element> ids;
  for (Element v : order) {
    prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), v), v);
    links.push_back(ElementSet::from_sorted(prefix));
    if (numbering) ids.push_back(static_cast<Element>(*numbering->global(prefix)));
  }
  return ids;
}

// A random maximal chain of a poset, walking up covers from a random minimal element.
std::vector<Element> random_maximal_chain(Rng& rng, const FinitePoset& order) {
  const ElementSet minimal = order.minimal_elements();
  std::vector<Element> chain{minimal[rng.below(minimal.size())]};
  while (!order.upper_covers(chain.back()).empty()) {
    const auto& up = order.upper_covers(chain.back());
    chain.push_back(up[rng.below(up.size())]);
  }
  return chain;
}

// Random non-empty subset of positions 0..n-1, ascending.
std::vector<std::size_t> random_subset(Rng& rng, std::size_t n) {
  std::vector<std::size_t> out;
  while (out.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.coin()) out.push_back(i);
    }
  }
  return out;
}

// A random chain of chains: nested prefixes of a shuffled maximal chain.
std::vector<std::vector<std::size_t>> random_chain_of_chains(Rng& rng, std::size_t length) {
  std::vector<std::size_t> order(length);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = length; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::vector<std::size_t>> nested;
  std::vector<std::size_t> prefix;
  for (std::size_t p : order) {
    prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), p), p);
    nested.push_back(prefix);
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i : random_subset(rng, length)) out.push_back(nested[i]);
  return out;
}

std::string show(const std::vector<ElementSet>& sets) {
  std::string s = "(";
  for (std::size_t i = 0; i < sets.size(); ++i) s += (i ? " < " : "") + sets[i].to_string();
  return s + ")";
}

constexpr std::size_t kMaxRecorded = 100;

void record(BoundsReport& report, BoundViolation v) {
  report.violations.push_back(std::move(v));
  std::sort(report.violations.begin(), report.violations.end());
  if (report.violations.size() > kMaxRecorded) report.violations.pop_back();
}

// Checks u(Δm(α)) ⊆ Cl(top face) given the m-values of the chains in α,
// bottom to top, and the closure of the top face of the top chain.
std::optional<std::string> first_inequality(const FinitePoset& poset,
                                            const std::vector<const ElementSet*>& m_values,
                                            const ElementSet& top_closure) {
  for (std::size_t i = 1; i < m_values.size(); ++i) {
    if (!refines(poset, *m_values[i - 1], *m_values[i])) {
      return "m is not monotone: " + m_values[i - 1]->to_string() + " vs " + m_values[i]->to_string();
    }
  }
  for (const auto* m : m_values) {
    if (!top_closure.includes(*m)) {
      return "m-value " + m->to_string() + " escapes " + top_closure.to_string();
    }
  }
  return std::nullopt;
}

// Checks max(∪ bottom(b)) refines m(Δu(β)), given each chain's bottom and
// min(Cl(u(b))).
std::optional<std::string> second_inequality(const FinitePoset& poset,
                                             const std::vector<ElementSet>& bottoms,
                                             const std::vector<ElementSet>& min_closures) {
  const ElementSet lhs = max_of_union(poset, bottoms);
  const ElementSet rhs = max_of_union(poset, min_closures);
  if (refines(poset, lhs, rhs)) return std::nullopt;
  return lhs.to_string() + " does not refine " + rhs.to_string();
}

void exhaustive_first(const FrameFamily& family, const SimplicialComplex& cb, BoundsReport& report) {
  const FinitePoset& poset = family.poset();
  const FaceNumbering cb_faces(cb);
  const SimplicialComplex sd = barycentric_subdivision(cb);
  const FaceNumbering chains(sd);
  MinClosureCache mins(poset);
  std::vector<ElementSet> m_value(chains.total());
  for (std::size_t g = 0; g < chains.total(); ++g) {
    m_value[g] = m_of_links(poset, mins, links_of(cb_faces, chains.face(g)));
  }
  std::vector<ElementSet> face_closure(cb_faces.total());
  for (std::size_t g = 0; g < cb_faces.total(); ++g) {
    face_closure[g] = closure(poset, cb_faces.face_set(g));
  }
  // Each α is determined by its top chain and a descending sequence of
  // proper non-empty sub-chains.
  for (std::size_t top = 0; top < chains.total(); ++top) {
    const auto top_chain = chains.face(top);
    const std::size_t s = top_chain.size();
    std::vector<std::size_t> id_of_mask(std::size_t{1} << s);
    std::vector<Vertex> buf;
    for (std::size_t mask = 1; mask < id_of_mask.size(); ++mask) {
      buf.clear();
      for (std::size_t i = 0; i < s; ++i) {
        if (mask >> i & 1U) buf.push_back(top_chain[i]);
      }
      id_of_mask[mask] = *chains.global(buf);
    }
    const ElementSet& cl = face_closure[top_chain.back()];
    std::vector<std::size_t> masks{id_of_mask.size() - 1};
    std::function<void()> descend = [&] {
      ++report.checked_cb;
      std::vector<const ElementSet*> values;
      for (auto it = masks.rbegin(); it != masks.rend(); ++it) values.push_back(&m_value[id_of_mask[*it]]);
      if (auto bad = first_inequality(poset, values, cl)) {
        BoundViolation v{1, {}, *bad};
        for (auto it = masks.rbegin(); it != masks.rend(); ++it) {
          v.chain_of_chains.push_back({links_of(cb_faces, chains.face(id_of_mask[*it]))});
        }
        record(report, std::move(v));
      }
      const std::size_t mask = masks.back();
      for (std::size_t sub = (mask - 1) & mask; sub != 0; sub = (sub - 1) & mask) {
        masks.push_back(sub);
        descend();
        masks.pop_back();
      }
    };
    descend();
  }
}

void exhaustive_second(const FrameFamily& family, const DecompositionPoset& pd, BoundsReport& report) {
  const FinitePoset& poset = family.poset();
  const SimplicialComplex dpd = order_complex(pd.order());
  const FaceNumbering chains(dpd);
  MinClosureCache mins(poset);
  std::vector<ElementSet> bottom(chains.total());
  std::vector<ElementSet> min_cl(chains.total());
  for (std::size_t g = 0; g < chains.total(); ++g) {
    auto f = chains.face(g);
    const auto links = pd_links(pd, std::vector<Element>(f.begin(), f.end()));
    bottom[g] = links.front();
    const ElementSet u = unite_all(links);
    if (!family.is_basis_compatible(u)) {
      record(report, {0, {{links}}, "u is not a face: " + u.to_string()});
      min_cl[g] = u;
      continue;
    }
    min_cl[g] = mins(u);
  }
  for (std::size_t top = 0; top < chains.total(); ++top) {
    const auto top_chain = chains.face(top);
    const std::size_t s = top_chain.size();
    std::vector<std::size_t> id_of_mask(std::size_t{1} << s);
    std::vector<Vertex> buf;
    for (std::size_t mask = 1; mask < id_of_mask.size(); ++mask) {
      buf.clear();
      for (std::size_t i = 0; i < s; ++i) {
        if (mask >> i & 1U) buf.push_back(top_chain[i]);
      }
      id_of_mask[mask] = *chains.global(buf);
    }
    std::vector<std::size_t> masks{id_of_mask.size() - 1};
    std::vector<ElementSet> bottoms;
    std::vector<ElementSet> mcl;
    std::function<void()> descend = [&] {
      ++report.checked_pd;
      const std::size_t id = id_of_mask[masks.back()];
      bottoms.push_back(bottom[id]);
      mcl.push_back(min_cl[id]);
      if (auto bad = second_inequality(poset, bottoms, mcl)) {
        BoundViolation v{2, {}, *bad};
        for (auto it = masks.rbegin(); it != masks.rend(); ++it) {
          auto f = chains.face(id_of_mask[*it]);
          v.chain_of_chains.push_back({pd_links(pd, std::vector<Element>(f.begin(), f.end()))});
        }
        record(report, std::move(v));
      }
      const std::size_t mask = masks.back();
      for (std::size_t sub = (mask - 1) & mask; sub != 0; sub = (sub - 1) & mask) {
        masks.push_back(sub);
        descend();
        masks.pop_back();
      }
      bottoms.pop_back();
      mcl.pop_back();
    };
    descend();
  }
}

void sampled_first(const FrameFamily& family, const SimplicialComplex& cb, const SampleSpec& spec,
                   BoundsReport& report) {
  const FinitePoset& poset = family.poset();
  MinClosureCache mins(poset);
  Rng rng(spec.seed);
  std::vector<ElementSet> flag;
  for (std::size_t n = 0; n < spec.samples; ++n) {
    random_flag(rng, cb, nullptr, flag);
    const auto alpha = random_chain_of_chains(rng, flag.size());
    std::vector<ElementSet> m_values;
    std::vector<ChainInPoset> as_chains;
    for (const auto& positions : alpha) {
      std::vector<ElementSet> links;
      for (std::size_t p : positions) links.push_back(flag[p]);
      m_values.push_back(m_of_links(poset, mins, links));
      as_chains.push_back({std::move(links)});
    }
    std::vector<const ElementSet*> ptrs;
    for (const auto& m : m_values) ptrs.push_back(&m);
    const ElementSet cl = closure(poset, as_chains.back().links.back());
    ++report.checked_cb;
    if (auto bad = first_inequality(poset, ptrs, cl)) record(report, {1, as_chains, *bad});
  }
}

void sampled_second(const FrameFamily& family, const DecompositionPoset& pd, const SampleSpec& spec,
                    BoundsReport& report) {
  const FinitePoset& poset = family.poset();
  MinClosureCache mins(poset);
  // Continue the stream of the first inequality with a distinct seed.
  Rng rng(spec.seed ^ 0x9E3779B97F4A7C15ULL);
  for (std::size_t n = 0; n < spec.samples; ++n) {
    const auto chain = random_maximal_chain(rng, pd.order());
    const auto beta = random_chain_of_chains(rng, chain.size());
    std::vector<ElementSet> bottoms;
    std::vector<ElementSet> mcl;
    std::vector<ChainInPoset> as_chains;
    bool defined = true;
    for (const auto& positions : beta) {
      std::vector<Element> members;
      for (std::size_t p : positions) members.push_back(chain[p]);
      auto links = pd_links(pd, members);
      bottoms.push_back(links.front());
      const ElementSet u = unite_all(links);
      if (!family.is_basis_compatible(u)) {
        record(report, {0, {{links}}, "u is not a face: " + u.to_string()});
        defined = false;
      } else {
        mcl.push_back(mins(u));
      }
      as_chains.push_back({std::move(links)});
    }
    ++report.checked_pd;
    if (!defined) continue;
    if (auto bad = second_inequality(poset, bottoms, mcl)) record(report, {2, as_chains, *bad});
  }
}

}  // namespace

ElementSet map_m(const FrameFamily& family, const ChainInPoset& chain) {
  validate_cb_chain(family, chain);
  MinClosureCache mins(family.poset());
  return m_of_links(family.poset(), mins, chain.links);
}

UResult map_u(const FrameFamily& family, const ChainInPoset& chain) {
  validate_pd_chain(family, chain);
  UResult r;
  r.set = unite_all(chain.links);
  r.is_face = family.is_basis_compatible(r.set);
  return r;
}

BoundsReport verify_composite_bounds(const FrameFamily& family, const DecompositionPoset& pd,
                                     std::optional<SampleSpec> sample, std::size_t exhaustive_limit) {
  const SimplicialComplex cb = build_CB(family);
  BoundsReport report;
  const std::size_t faces = FaceIndex(cb).total();
  if (!sample && faces <= exhaustive_limit) {
    report.exhaustive = true;
    exhaustive_first(family, cb, report);
    exhaustive_second(family, pd, report);
  } else {
    const SampleSpec spec = sample.value_or(SampleSpec{});
    report.seed = spec.seed;
    sampled_first(family, cb, spec, report);
    sampled_second(family, pd, spec, report);
  }
  return report;
}

MapCheckReport check_m_in_pd(const FrameFamily& family, const DecompositionPoset& pd,
                             std::optional<SampleSpec> sample) {
  const FinitePoset& poset = family.poset();
  const SimplicialComplex cb = build_CB(family);
  MinClosureCache mins(poset);
  MapCheckReport report;
  auto check = [&](const std::vector<ElementSet>& links, const std::vector<ElementSet>& sub) {
    ++report.checked;
    const ElementSet m = m_of_links(poset, mins, links);
    auto fail = [&](std::string why) {
      if (!report.ok) return;
      report.ok = false;
      report.witness = ChainInPoset{links};
      report.detail = std::move(why);
    };
    if (!pd.contains(m)) return fail("m(c) = " + m.to_string() + " is not in PD");
    const Bitset w = family.p1_witnesses(links.back());
    for (auto i = w.find_first(); i != Bitset::npos; i = w.find_next(i)) {
      const auto p = family.properties(m, i);
      if (!(p.p1 && p.p2)) {
        return fail("m(c) = " + m.to_string() + " fails P1/P2 for frame " +
                    family.frame(i).to_string());
      }
    }
    if (!sub.empty()) {
      const ElementSet ms = m_of_links(poset, mins, sub);
      if (!refines(poset, ms, m)) {
        return fail("m not monotone on sub-chain " + show(sub) + ": " + ms.to_string() +
                    " vs " + m.to_string());
      }
    }
  };
  if (!sample) {
    const FaceNumbering cb_faces(cb);
    const FaceIndex chains(barycentric_subdivision(cb));
    for (int k = 0; k <= chains.dimension(); ++k) {
      for (std::size_t i = 0; i < chains.count(k); ++i) {
        const auto links = links_of(cb_faces, chains.face(k, i));
        check(links, {});
        for (std::size_t drop = 0; drop < links.size() && links.size() > 1; ++drop) {
          auto sub = links;
          sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
          check(links, sub);
        }
      }
    }
  } else {
    Rng rng(sample->seed);
    std::vector<ElementSet> flag;
    for (std::size_t n = 0; n < sample->samples; ++n) {
      random_flag(rng, cb, nullptr, flag);
      std::vector<ElementSet> links;
      for (std::size_t p : random_subset(rng, flag.size())) links.push_back(flag[p]);
      std::vector<ElementSet> sub;
      for (std::size_t p : random_subset(rng, links.size())) sub.push_back(links[p]);
      check(links, sub);
    }
  }
  return report;
}

MapCheckReport check_u_total(const FrameFamily& family, const DecompositionPoset& pd,
                             std::optional<SampleSpec> sample) {
  MapCheckReport report;
  auto check = [&](std::vector<Element> members) {
    ++report.checked;
    auto links = pd_links(pd, std::move(members));
    const ElementSet u = unite_all(links);
    if (report.ok && !family.is_basis_compatible(u)) {
      report.ok = false;
      report.witness = ChainInPoset{std::move(links)};
      report.detail = "u(c) = " + u.to_string() + " is not a face of CB";
    }
  };
  if (!sample) {
    for (const auto& chain : pd.order().all_chains()) check(chain);
  } else {
    Rng rng(sample->seed);
    for (std::size_t n = 0; n < sample->samples; ++n) {
      const auto chain = random_maximal_chain(rng, pd.order());
      std::vector<Element> members;
      for (std::size_t p : random_subset(rng, chain.size())) members.push_back(chain[p]);
      check(std::move(members));
    }
  }
  return report;
}

namespace {

// Upper bound on the faces of the k-fold barycentric subdivision.
double subdivided_faces(const SimplicialComplex& k, int times) {
  double total = 0;
  for (const auto& f : k.facets()) {
    double flags = 1;
    for (std::size_t i = 2; i <= f.size(); ++i) flags *= static_cast<double>(i);
    double facets = 1;
    for (int t = 0; t < times; ++t) facets *= flags;
    total += facets * (std::ldexp(1.0, static_cast<int>(f.size())) - 1);
  }
  return total;
}

}  // namespace

IsoVerdict induced_homology_iso(const FrameFamily& family, const DecompositionPoset& pd,
                                InducedMap which, std::size_t face_budget) {
  const SimplicialComplex cb = build_CB(family);
  const SimplicialComplex dpd = order_complex(pd.order());
  const std::string advice = "; compare Betti numbers instead";
  if (which == InducedMap::u) {
    if (subdivided_faces(dpd, 1) + subdivided_faces(cb, 1) > static_cast<double>(face_budget)) {
      throw ResourceError("subdivisions for the u-map exceed the face budget" + advice);
    }
    const FaceNumbering chains(dpd);
    const FaceNumbering cb_faces(cb);
    const SimplicialComplex domain = barycentric_subdivision(dpd);
    const SimplicialComplex codomain = barycentric_subdivision(cb);
    std::vector<Vertex> image(chains.total());
    for (std::size_t g = 0; g < chains.total(); ++g) {
      const auto f = chains.face(g);
      const auto links = pd_links(pd, std::vector<Element>(f.begin(), f.end()));
      const ElementSet u = unite_all(links);
      const auto id = cb_faces.global(u.members());
      if (!id) throw InputError("u is undefined on " + show(links) + ": union is not a CB face");
      image[g] = static_cast<Vertex>(*id);
    }
    return homology_map_is_iso(domain, codomain, [&](Vertex v) { return image[v]; });
  }
  if (subdivided_faces(cb, 2) + subdivided_faces(dpd, 0) > static_cast<double>(face_budget)) {
    throw ResourceError("double subdivision for the m-map exceeds the face budget" + advice);
  }
  const FaceNumbering cb_faces(cb);
  const SimplicialComplex sd = barycentric_subdivision(cb);
  const FaceNumbering chains(sd);
  const SimplicialComplex domain = barycentric_subdivision(sd);
  MinClosureCache mins(family.poset());
  std::vector<Vertex> image(chains.total());
  for (std::size_t g = 0; g < chains.total(); ++g) {
    const ElementSet m = m_of_links(family.poset(), mins, links_of(cb_faces, chains.face(g)));
    const auto id = pd.index_of(m);
    if (!id) throw std::logic_error("m-value " + m.to_string() + " is not in PD");
    image[g] = static_cast<Vertex>(*id);
  }
  return homology_map_is_iso(domain, dpd, [&](Vertex v) { return image[v]; });
}

}  // namespace cbpd
