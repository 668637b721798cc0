#include "cbpd/poset.hpp"

#include <algorithm>
#include <numeric>

#include "cbpd/errors.hpp"

namespace cbpd {

namespace {

std::vector<std::size_t> find_cycle(std::size_t n, const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<int> color(n, 0);
  std::vector<std::size_t> parent(n, n);
  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < adj[v].size()) {
        const std::size_t w = adj[v][next++];
        if (color[w] == 1) {
          std::vector<std::size_t> cycle{w};
          for (std::size_t u = v; u != w; u = parent[u]) cycle.push_back(u);
          std::reverse(cycle.begin() + 1, cycle.end());
          return cycle;
        }
        if (color[w] == 0) {
          color[w] = 1;
          parent[w] = v;
          stack.emplace_back(w, 0);
        }
      } else {
        color[v] = 2;
        stack.pop_back();
      }
    }
  }
  return {};
}

}  // namespace

FinitePoset FinitePoset::from_covers(std::size_t n,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& covers,
                                     std::vector<std::string> labels) {
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<std::size_t> indegree(n, 0);
  for (auto [i, j] : covers) {
    if (i >= n || j >= n) {
      throw InputError("cover (" + std::to_string(i) + "," + std::to_string(j) +
                       ") out of range for n=" + std::to_string(n));
    }
    adj[i].push_back(j);
    ++indegree[j];
  }
  std::vector<std::size_t> topo;
  topo.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) topo.push_back(i);
  }
  for (std::size_t head = 0; head < topo.size(); ++head) {
    for (std::size_t j : adj[topo[head]]) {
      if (--indegree[j] == 0) topo.push_back(j);
    }
  }
  if (topo.size() != n) {
    auto cycle = find_cycle(n, adj);
    std::string msg = "cover relation has a cycle:";
    for (std::size_t v : cycle) msg += " " + std::to_string(v);
    throw InvalidPosetError(msg, std::move(cycle));
  }
  std::vector<Bitset> up(n, Bitset(n));
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    up[*it].set(*it);
    for (std::size_t j : adj[*it]) up[*it] |= up[j];
  }
  return from_up_sets(std::move(up), std::move(labels));
}

FinitePoset FinitePoset::from_relation(std::size_t n,
                                       const std::function<bool(std::size_t, std::size_t)>& leq,
                                       std::vector<std::string> labels, bool validate) {
  std::vector<Bitset> up(n, Bitset(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (leq(i, j)) up[i].set(j);
    }
  }
  if (validate) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!up[i].test(i)) throw InvalidPosetError("relation not reflexive at " + std::to_string(i));
      for (auto j = up[i].find_next(i); j != Bitset::npos; j = up[i].find_next(j)) {
        if (up[j].test(i)) {
          throw InvalidPosetError("relation not antisymmetric: " + std::to_string(i) + " and " +
                                      std::to_string(j),
                                  {i, j});
        }
      }
      for (auto j = up[i].find_first(); j != Bitset::npos; j = up[i].find_next(j)) {
        if (!up[j].is_subset_of(up[i])) {
          throw InvalidPosetError("relation not transitive through " + std::to_string(i) + " <= " +
                                  std::to_string(j));
        }
      }
    }
  }
  return from_up_sets(std::move(up), std::move(labels));
}

FinitePoset FinitePoset::from_up_sets(std::vector<Bitset> up, std::vector<std::string> labels) {
  const std::size_t n = up.size();
  if (!labels.empty() && labels.size() != n) {
    throw InputError("label count " + std::to_string(labels.size()) + " does not match n=" +
                     std::to_string(n));
  }
  FinitePoset p;
  p.up_ = std::move(up);
  p.labels_ = std::move(labels);
  p.down_.assign(n, Bitset(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (auto j = p.up_[i].find_first(); j != Bitset::npos; j = p.up_[i].find_next(j)) {
      p.down_[j].set(i);
    }
  }
  // x < y implies |down(x)| < |down(y)|, so sorting by down-set size is a
  // linear extension.
  std::vector<std::size_t> down_size(n);
  for (std::size_t i = 0; i < n; ++i) down_size[i] = p.down_[i].count();
  p.linear_.resize(n);
  std::iota(p.linear_.begin(), p.linear_.end(), Element{0});
  std::stable_sort(p.linear_.begin(), p.linear_.end(),
                   [&](Element a, Element b) { return down_size[a] < down_size[b]; });

  p.upper_covers_.assign(n, {});
  p.lower_covers_.assign(n, {});
  for (std::size_t x = 0; x < n; ++x) {
    Bitset strict = p.up_[x];
    strict.reset(x);
    for (auto y = strict.find_first(); y != Bitset::npos; y = strict.find_next(y)) {
      // y covers x iff nothing of the strict up-set lies strictly below y.
      Bitset between = p.down_[y] & strict;
      if (between.count() == 1) {
        p.upper_covers_[x].push_back(static_cast<Element>(y));
        p.lower_covers_[y].push_back(static_cast<Element>(x));
      }
    }
  }
  for (auto& v : p.lower_covers_) std::sort(v.begin(), v.end());

  p.height_.assign(n, 0);
  for (Element x : p.linear_) {
    std::size_t h = 1;
    for (Element y : p.lower_covers_[x]) h = std::max(h, p.height_[y] + 1);
    p.height_[x] = h;
  }
  return p;
}

Bitset FinitePoset::lower_bounds(const ElementSet& s) const {
  if (s.empty()) throw InputError("lower bounds of an empty set");
  Bitset b = down_[s[0]];
  for (std::size_t i = 1; i < s.size(); ++i) b &= down_[s[i]];
  return b;
}

Bitset FinitePoset::upper_bounds(const ElementSet& s) const {
  if (s.empty()) throw InputError("upper bounds of an empty set");
  Bitset b = up_[s[0]];
  for (std::size_t i = 1; i < s.size(); ++i) b &= up_[s[i]];
  return b;
}

std::optional<Element> FinitePoset::greatest_of(const Bitset& subset) const {
  for (auto m = subset.find_first(); m != Bitset::npos; m = subset.find_next(m)) {
    if (subset.is_subset_of(down_[m])) return static_cast<Element>(m);
  }
  return std::nullopt;
}

std::optional<Element> FinitePoset::least_of(const Bitset& subset) const {
  for (auto m = subset.find_first(); m != Bitset::npos; m = subset.find_next(m)) {
    if (subset.is_subset_of(up_[m])) return static_cast<Element>(m);
  }
  return std::nullopt;
}

std::optional<Element> FinitePoset::meet_of(const ElementSet& s) const {
  if (s.empty()) throw InputError("meet of an empty set");
  return greatest_of(lower_bounds(s));
}

std::optional<Element> FinitePoset::join_of(const ElementSet& s) const {
  if (s.empty()) throw InputError("join of an empty set");
  return least_of(upper_bounds(s));
}

std::size_t FinitePoset::total_height() const {
  std::size_t h = 0;
  for (std::size_t x : height_) h = std::max(h, x);
  return h + 1;
}

bool FinitePoset::is_antichain(const ElementSet& s) const {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (comparable(s[i], s[j])) return false;
    }
  }
  return true;
}

bool FinitePoset::is_chain(const ElementSet& s) const {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (!comparable(s[i], s[j])) return false;
    }
  }
  return true;
}

ElementSet FinitePoset::extreme_elements(const ElementSet& s, Extreme direction) const {
  if (s.empty()) throw InputError("extreme elements of an empty set");
  std::vector<Element> out;
  for (Element x : s) {
    bool extreme = true;
    for (Element y : s) {
      if (direction == Extreme::max ? less(x, y) : less(y, x)) {
        extreme = false;
        break;
      }
    }
    if (extreme) out.push_back(x);
  }
  return ElementSet::from_sorted(std::move(out));
}

ElementSet FinitePoset::minimal_elements() const {
  std::vector<Element> out;
  for (std::size_t x = 0; x < size(); ++x) {
    if (lower_covers_[x].empty()) out.push_back(static_cast<Element>(x));
  }
  return ElementSet::from_sorted(std::move(out));
}

std::vector<ElementSet> FinitePoset::maximal_chains() const {
  std::vector<ElementSet> chains;
  std::vector<Element> path;
  std::function<void(Element)> walk = [&](Element x) {
    path.push_back(x);
    if (upper_covers_[x].empty()) {
      chains.emplace_back(path);
    } else {
      for (Element y : upper_covers_[x]) walk(y);
    }
    path.pop_back();
  };
  for (Element x : minimal_elements()) walk(x);
  return chains;
}

std::vector<std::vector<Element>> FinitePoset::all_chains() const {
  std::vector<std::vector<Element>> chains;
  std::vector<Element> path;
  std::function<void(Element)> walk = [&](Element x) {
    path.push_back(x);
    chains.push_back(path);
    const Bitset& above = up_[x];
    for (auto y = above.find_first(); y != Bitset::npos; y = above.find_next(y)) {
      if (y != x) walk(static_cast<Element>(y));
    }
    path.pop_back();
  };
  for (std::size_t x = 0; x < size(); ++x) walk(static_cast<Element>(x));
  return chains;
}

std::string FinitePoset::label(Element x) const {
  return labels_.empty() ? std::to_string(x) : labels_[x];
}

std::vector<std::pair<Element, Element>> FinitePoset::cover_pairs() const {
  std::vector<std::pair<Element, Element>> out;
  for (std::size_t x = 0; x < size(); ++x) {
    for (Element y : upper_covers_[x]) out.emplace_back(static_cast<Element>(x), y);
  }
  return out;
}

SimplicialComplex order_complex(const FinitePoset& poset) {
  return SimplicialComplex(poset.size(), poset.maximal_chains());
}

}  // namespace cbpd
