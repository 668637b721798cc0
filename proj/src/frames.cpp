#include "cbpd/frames.hpp"

#include <algorithm>

#include "cbpd/errors.hpp"
#include "cbpd/parallel.hpp"
#include "cbpd/random.hpp"

namespace cbpd {

ElementSet sigma_of(const FinitePoset& poset, const ElementSet& tau) {
  if (tau.empty()) throw InputError("sigma_of: empty frame");
  if (tau.size() > 24) throw ResourceError("sigma_of: frame too large");
  std::vector<Element> joins;
  const std::uint64_t full = (std::uint64_t{1} << tau.size()) - 1;
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    if (auto j = poset.join_of(tau.select(mask))) joins.push_back(*j);
  }
  return ElementSet(std::move(joins));
}

FrameVerdict validate_frame(const FinitePoset& poset, const ElementSet& tau) {
  if (tau.empty()) throw InputError("validate_frame: empty frame");
  for (std::size_t i = 0; i < tau.size(); ++i) {
    for (std::size_t j = i + 1; j < tau.size(); ++j) {
      if (poset.comparable(tau[i], tau[j])) {
        return {false, "not an antichain", std::make_pair(tau[i], tau[j])};
      }
    }
  }
  const ElementSet sigma = sigma_of(poset, tau);
  const Bitset sigma_bits = sigma.to_bits(poset.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    for (std::size_t j = i + 1; j < sigma.size(); ++j) {
      const Bitset lower = poset.down_set(sigma[i]) & poset.down_set(sigma[j]);
      if (lower.none()) continue;
      const auto meet = poset.greatest_of(lower);
      if (!meet) {
        return {false, "common lower bound without a meet", std::make_pair(sigma[i], sigma[j])};
      }
      if (!sigma_bits.test(*meet)) {
        return {false, "meet outside the join closure", std::make_pair(sigma[i], sigma[j])};
      }
    }
  }
  return {true, "", std::nullopt};
}

namespace {

Properties properties_with(const FinitePoset& poset, const ElementSet& sigma, const ElementSet& tau,
                           const Bitset& sigma_bits) {
  Properties p;
  p.p1 = std::all_of(sigma.begin(), sigma.end(), [&](Element y) { return sigma_bits.test(y); });
  p.p2 = true;
  p.p3 = true;
  for (Element x : tau) {
    std::size_t above = 0;
    for (Element y : sigma) {
      if (poset.leq(x, y)) ++above;
    }
    if (above > 1) p.p2 = false;
    if (above == 0) p.p3 = false;
  }
  return p;
}

}  // namespace

Properties check_properties(const FinitePoset& poset, const ElementSet& sigma, const ElementSet& tau) {
  if (sigma.empty() || tau.empty()) throw InputError("check_properties: empty argument");
  return properties_with(poset, sigma, tau, sigma_of(poset, tau).to_bits(poset.size()));
}

FrameFamily::FrameFamily(std::shared_ptr<const FinitePoset> poset, std::vector<ElementSet> frames)
    : poset_(std::move(poset)) {
  if (!poset_) throw InputError("frame family without a poset");
  canonicalize(frames);
  if (frames.empty()) throw InvalidFrameError("frame family is empty");
  for (const auto& tau : frames) {
    if (tau.empty()) throw InvalidFrameError("empty frame");
    if (tau.back() >= poset_->size()) {
      throw InvalidFrameError("frame " + tau.to_string() + " has an index out of range");
    }
  }
  std::vector<FrameVerdict> verdicts(frames.size());
  parallel_for(frames.size(), [&](std::size_t i) { verdicts[i] = validate_frame(*poset_, frames[i]); });
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!verdicts[i].valid) {
      std::string msg = "invalid frame " + frames[i].to_string() + ": " + verdicts[i].reason;
      if (verdicts[i].witness) {
        msg += " (" + std::to_string(verdicts[i].witness->first) + ", " +
               std::to_string(verdicts[i].witness->second) + ")";
      }
      throw InvalidFrameError(msg);
    }
  }
  frames_ = std::move(frames);
  sigmas_.resize(frames_.size());
  parallel_for(frames_.size(), [&](std::size_t i) { sigmas_[i] = sigma_of(*poset_, frames_[i]); });
  for (const auto& s : sigmas_) sigma_bits_.push_back(s.to_bits(poset_->size()));
  for (const auto& f : frames_) max_frame_size_ = std::max(max_frame_size_, f.size());
}

Properties FrameFamily::properties(const ElementSet& sigma, std::size_t frame_index) const {
  return properties_with(*poset_, sigma, frames_[frame_index], sigma_bits_[frame_index]);
}

Bitset FrameFamily::p1_witnesses(const ElementSet& sigma) const {
  Bitset w(frames_.size());
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const auto& bits = sigma_bits_[i];
    if (std::all_of(sigma.begin(), sigma.end(), [&](Element y) { return bits.test(y); })) w.set(i);
  }
  return w;
}

bool FrameFamily::is_basis_compatible(const ElementSet& sigma) const {
  return p1_witnesses(sigma).any();
}

bool FrameFamily::is_partial_decomposition(const ElementSet& sigma) const {
  if (sigma.empty()) return false;
  const Bitset w = p1_witnesses(sigma);
  for (auto i = w.find_first(); i != Bitset::npos; i = w.find_next(i)) {
    if (properties(sigma, i).p2) return true;
  }
  return false;
}

bool FrameFamily::is_decomposition(const ElementSet& sigma) const {
  if (sigma.empty()) return false;
  const Bitset w = p1_witnesses(sigma);
  for (auto i = w.find_first(); i != Bitset::npos; i = w.find_next(i)) {
    const auto p = properties(sigma, i);
    if (p.p2 && p.p3) return true;
  }
  return false;
}

ElementSet FrameFamily::support(std::size_t frame_index, Element y) const {
  std::vector<Element> out;
  for (Element x : frames_[frame_index]) {
    if (poset_->leq(x, y)) out.push_back(x);
  }
  return ElementSet::from_sorted(std::move(out));
}

bool FrameFamily::sigma_is_boolean(std::size_t frame_index) const {
  const ElementSet& tau = frames_[frame_index];
  const ElementSet& sigma = sigmas_[frame_index];
  if (tau.size() < 2 || tau.size() > 24) return false;
  if (sigma.size() != (std::size_t{1} << tau.size()) - 2) return false;
  std::vector<ElementSet> supports;
  for (Element y : sigma) {
    auto s = support(frame_index, y);
    if (s.empty() || s.size() == tau.size()) return false;
    supports.push_back(std::move(s));
  }
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      if (i != j && supports[i] == supports[j]) return false;
      if (poset_->leq(sigma[i], sigma[j]) != supports[j].includes(supports[i])) return false;
    }
  }
  return true;
}

bool refines(const FinitePoset& poset, const ElementSet& finer, const ElementSet& coarser) {
  return std::all_of(finer.begin(), finer.end(), [&](Element x) {
    return std::any_of(coarser.begin(), coarser.end(), [&](Element y) { return poset.leq(x, y); });
  });
}

DecompositionPoset::DecompositionPoset(const FinitePoset& ambient, std::vector<ElementSet> members)
    : members_(std::move(members)) {
  canonicalize(members_);
  std::vector<Bitset> below;
  below.reserve(members_.size());
  for (const auto& s : members_) {
    Bitset b(ambient.size());
    for (Element y : s) b |= ambient.down_set(y);
    below.push_back(std::move(b));
  }
  // Refinement restricted to antichains is a partial order; callers only hand
  // in antichains, so validation is skipped here and done in tests.
  order_ = FinitePoset::from_relation(
      members_.size(),
      [&](std::size_t i, std::size_t j) {
        const auto& bits = below[j];
        return std::all_of(members_[i].begin(), members_[i].end(),
                           [&](Element x) { return bits.test(x); });
      },
      {}, false);
  for (std::size_t i = 0; i < members_.size(); ++i) index_.emplace(members_[i], i);
}

std::optional<std::size_t> DecompositionPoset::index_of(const ElementSet& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int DecompositionPoset::dimension() const {
  if (members_.empty()) return -1;
  std::size_t h = 0;
  for (std::size_t i = 0; i < order_.size(); ++i) {
    h = std::max(h, order_.height_of(static_cast<Element>(i)));
  }
  return static_cast<int>(h) - 1;
}

namespace {

// Calls visit(blocks) for each set partition of {0..k-1}, blocks given as
// restricted growth string.
template <class Visit>
void for_each_set_partition(std::size_t k, Visit&& visit) {
  if (k == 0) return;
  std::vector<std::size_t> rgs(k, 0);
  std::vector<std::size_t> maxima(k, 0);  // maxima[i] = max(rgs[0..i])
  while (true) {
    visit(rgs);
    std::size_t i = k - 1;
    while (i > 0 && rgs[i] > maxima[i - 1]) --i;
    if (i == 0) return;
    ++rgs[i];
    maxima[i] = std::max(maxima[i - 1], rgs[i]);
    for (std::size_t j = i + 1; j < k; ++j) {
      rgs[j] = 0;
      maxima[j] = maxima[i];
    }
  }
}

}  // namespace

DecompositionPoset build_D(const FrameFamily& family) {
  const FinitePoset& poset = family.poset();
  std::vector<std::vector<ElementSet>> per_frame(family.size());
  parallel_for(family.size(), [&](std::size_t f) {
    const ElementSet& tau = family.frame(f);
    for_each_set_partition(tau.size(), [&](const std::vector<std::size_t>& rgs) {
      const std::size_t blocks = *std::max_element(rgs.begin(), rgs.end()) + 1;
      std::vector<std::vector<Element>> members(blocks);
      for (std::size_t i = 0; i < tau.size(); ++i) members[rgs[i]].push_back(tau[i]);
      std::vector<Element> joins;
      for (auto& block : members) {
        auto j = poset.join_of(ElementSet::from_sorted(std::move(block)));
        if (!j) return;
        joins.push_back(*j);
      }
      ElementSet sigma(std::move(joins));
      if (family.properties(sigma, f).p2) per_frame[f].push_back(std::move(sigma));
    });
  });
  std::vector<ElementSet> all;
  for (auto& v : per_frame) {
    for (auto& s : v) all.push_back(std::move(s));
  }
  return DecompositionPoset(poset, std::move(all));
}

DecompositionPoset build_PD(const FrameFamily& family) {
  const DecompositionPoset d = build_D(family);
  std::vector<ElementSet> all;
  for (const auto& sigma : d.members()) {
    if (sigma.size() > 24) throw ResourceError("decomposition too large for subset enumeration");
    const std::uint64_t full = (std::uint64_t{1} << sigma.size()) - 1;
    for (std::uint64_t mask = 1; mask <= full; ++mask) all.push_back(sigma.select(mask));
  }
  return DecompositionPoset(family.poset(), std::move(all));
}

SimplicialComplex build_CB(const FrameFamily& family) {
  std::vector<ElementSet> facets;
  for (std::size_t i = 0; i < family.size(); ++i) facets.push_back(family.sigma(i));
  return SimplicialComplex(family.poset().size(), std::move(facets));
}

namespace {

std::vector<Bitset> witness_table(const FrameFamily& family, const DecompositionPoset& pd) {
  std::vector<Bitset> w(pd.size());
  parallel_for(pd.size(), [&](std::size_t i) { w[i] = family.p1_witnesses(pd.member(i)); });
  return w;
}

}  // namespace

EPReport check_EP(const FrameFamily& family, const DecompositionPoset& pd,
                  std::optional<SampleSpec> sample) {
  const auto w = witness_table(family, pd);
  const FinitePoset& order = pd.order();
  EPReport report;
  auto test = [&](std::size_t i, std::size_t j) {
    ++report.checked;
    if (!w[i].intersects(w[j])) {
      report.holds = false;
      report.witness = std::make_pair(pd.member(i), pd.member(j));
      return false;
    }
    return true;
  };
  if (!sample) {
    for (std::size_t i = 0; i < pd.size(); ++i) {
      const Bitset& up = order.up_set(static_cast<Element>(i));
      for (auto j = up.find_first(); j != Bitset::npos; j = up.find_next(j)) {
        if (!test(i, j)) return report;
      }
    }
    return report;
  }
  if (pd.size() == 0) return report;
  Rng rng(sample->seed);
  for (std::size_t s = 0; s < sample->samples; ++s) {
    const auto i = static_cast<std::size_t>(rng.below(pd.size()));
    const Bitset& up = order.up_set(static_cast<Element>(i));
    auto pick = rng.below(up.count());
    auto j = up.find_first();
    while (pick-- > 0) j = up.find_next(j);
    if (!test(i, j)) return report;
  }
  return report;
}

EPReport check_EP_chains(const FrameFamily& family, const DecompositionPoset& pd) {
  const auto w = witness_table(family, pd);
  EPReport report;
  for (const auto& chain : pd.order().maximal_chains()) {
    ++report.checked;
    Bitset common = w[chain[0]];
    for (Element i : chain) common &= w[i];
    if (common.none()) {
      report.holds = false;
      report.witness = std::make_pair(pd.member(chain.front()), pd.member(chain.back()));
      return report;
    }
  }
  return report;
}

DimensionReport dimension_report(const FrameFamily& family, const SimplicialComplex& cb,
                                 const DecompositionPoset& pd, const DecompositionPoset& d,
                                 bool ep_holds) {
  DimensionReport r;
  r.dim_cb = cb.dimension();
  r.dim_pd = pd.dimension();
  r.dim_d = d.dimension();
  r.m = family.max_frame_size();
  r.ep = ep_holds;
  r.boolean_frames = true;
  std::size_t max_sigma = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    max_sigma = std::max(max_sigma, family.sigma(i).size());
    if (family.frame(i).size() != r.m || !family.sigma_is_boolean(i)) r.boolean_frames = false;
  }
  const long m = static_cast<long>(r.m);
  const long two_m = m < 62 ? (1L << m) : 0;
  auto add = [&](std::string name, bool applicable, bool ok) {
    const auto status =
        !applicable ? CheckStatus::not_applicable : (ok ? CheckStatus::pass : CheckStatus::fail);
    r.checks.push_back({std::move(name), status});
    if (status == CheckStatus::fail) r.bounds_ok = false;
  };
  add("dim CB = max|Sigma| - 1", true, r.dim_cb == static_cast<long>(max_sigma) - 1);
  add("m - 1 <= dim CB <= 2^m - 2", two_m != 0, m - 1 <= r.dim_cb && r.dim_cb <= two_m - 2);
  add("0 <= dim D <= m - 1", ep_holds, 0 <= r.dim_d && r.dim_d <= m - 1);
  add("m - 1 <= dim PD <= 2m - 2", ep_holds, m - 1 <= r.dim_pd && r.dim_pd <= 2 * m - 2);
  add("dim CB = 2^m - 3", r.boolean_frames && two_m != 0, r.dim_cb == two_m - 3);
  add("dim PD = 2m - 3", r.boolean_frames && ep_holds, r.dim_pd == 2 * m - 3);
  add("dim D = m - 2", r.boolean_frames && ep_holds, r.dim_d == m - 2);
  return r;
}

HeightReport check_height_additivity(const FrameFamily& family, const DecompositionPoset& pd) {
  const FinitePoset& poset = family.poset();
  HeightReport r;
  for (const auto& sigma : pd.members()) {
    const auto j = poset.join_of(sigma);
    if (!j) continue;
    ++r.checked;
    std::size_t sum = 0;
    for (Element x : sigma) sum += poset.height_of(x);
    if (poset.height_of(*j) != sum) {
      r.ok = false;
      r.witness = sigma;
      return r;
    }
  }
  return r;
}

}  // namespace cbpd
