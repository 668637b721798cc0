#pragma once

#include <memory>
#include <vector>

#include "cbpd/element_set.hpp"
#include "cbpd/frames.hpp"
#include "cbpd/poset.hpp"
#include "cbpd/random.hpp"

namespace cbpd::testing {

// Random poset: i < j kept with probability 1/density, then closed transitively.
inline FinitePoset random_poset(Rng& rng, std::size_t n, std::uint64_t density = 3) {
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.below(density) == 0) covers.emplace_back(i, j);
    }
  }
  return FinitePoset::from_covers(n, covers);
}

// Every non-empty subset of {0..n-1} as bit masks in increasing order.
inline std::vector<ElementSet> all_subsets(std::size_t n) {
  std::vector<ElementSet> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Element> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) s.push_back(static_cast<Element>(i));
    }
    out.push_back(ElementSet::from_sorted(std::move(s)));
  }
  return out;
}

// a=0, b=1, c=2, d=3 with the single cover a<c; frames {a,b} and {c,d}.
inline FrameFamily non_ep_family() {
  auto poset = std::make_shared<const FinitePoset>(FinitePoset::from_covers(4, {{0, 2}}));
  return FrameFamily(poset, {{0, 1}, {2, 3}});
}

}  // namespace cbpd::testing
