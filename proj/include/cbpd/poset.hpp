#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cbpd/complex.hpp"
#include "cbpd/element_set.hpp"

namespace cbpd {

enum class Extreme { min, max };

// Finite poset on elements 0..n-1 stored as a dense order matrix. The bounds
// 0_S and 1_S of the bounded extension are virtual: they are never elements,
// so meets and joins that would land on them do not exist.
//
// Immutable after construction.
class FinitePoset {
 public:
  FinitePoset() = default;

  // Reflexive-transitive closure of `covers` (pairs i < j). Throws
  // InvalidPosetError carrying a witness cycle when the pairs are cyclic.
  static FinitePoset from_covers(std::size_t n,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& covers,
                                 std::vector<std::string> labels = {});

  // `leq(i, j)` decides i <= j. With `validate`, reflexivity, antisymmetry and
  // transitivity are checked and violations throw InvalidPosetError.
  static FinitePoset from_relation(std::size_t n,
                                   const std::function<bool(std::size_t, std::size_t)>& leq,
                                   std::vector<std::string> labels = {}, bool validate = true);

  std::size_t size() const { return up_.size(); }
  bool leq(Element a, Element b) const { return up_[a].test(b); }
  bool less(Element a, Element b) const { return a != b && up_[a].test(b); }
  bool comparable(Element a, Element b) const { return leq(a, b) || leq(b, a); }

  // {y : x <= y} and {y : y <= x}.
  const Bitset& up_set(Element x) const { return up_[x]; }
  const Bitset& down_set(Element x) const { return down_[x]; }

  // Common lower / upper bounds of a non-empty set.
  Bitset lower_bounds(const ElementSet& s) const;
  Bitset upper_bounds(const ElementSet& s) const;

  // Greatest (least) element of a subset given as bits, if any.
  std::optional<Element> greatest_of(const Bitset& subset) const;
  std::optional<Element> least_of(const Bitset& subset) const;

  std::optional<Element> meet_of(const ElementSet& s) const;
  std::optional<Element> join_of(const ElementSet& s) const;

  // Dimension of the order complex of the bounded extension below x, so that
  // minimal elements have height 1.
  std::size_t height_of(Element x) const { return height_[x]; }
  // Dimension of the order complex of the bounded extension.
  std::size_t total_height() const;

  bool is_antichain(const ElementSet& s) const;
  bool is_chain(const ElementSet& s) const;
  ElementSet extreme_elements(const ElementSet& s, Extreme direction) const;

  // Cover relations: x is covered by each element of upper_covers(x).
  const std::vector<Element>& upper_covers(Element x) const { return upper_covers_[x]; }
  const std::vector<Element>& lower_covers(Element x) const { return lower_covers_[x]; }

  ElementSet minimal_elements() const;
  // All maximal chains, each listed in increasing order. Chains are returned as
  // ElementSets (sorted by index, not by order).
  std::vector<ElementSet> maximal_chains() const;
  // Every chain in increasing order, each as a list bottom to top.
  std::vector<std::vector<Element>> all_chains() const;
  // Indices sorted along a linear extension.
  const std::vector<Element>& linear_extension() const { return linear_; }

  bool has_labels() const { return !labels_.empty(); }
  std::string label(Element x) const;
  const std::vector<std::string>& labels() const { return labels_; }

  std::vector<std::pair<Element, Element>> cover_pairs() const;

 private:
  static FinitePoset from_up_sets(std::vector<Bitset> up, std::vector<std::string> labels);

  std::vector<Bitset> up_;
  std::vector<Bitset> down_;
  std::vector<std::size_t> height_;
  std::vector<Element> linear_;
  std::vector<std::vector<Element>> upper_covers_;
  std::vector<std::vector<Element>> lower_covers_;
  std::vector<std::string> labels_;
};

// Simplices are the chains of the poset; facets are the maximal chains.
SimplicialComplex order_complex(const FinitePoset& poset);

}  // namespace cbpd
