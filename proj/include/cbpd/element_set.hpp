#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace cbpd {

using Element = std::uint32_t;
using Bitset = boost::dynamic_bitset<std::uint64_t>;

// Sorted, duplicate-free set of element indices. Used for frames, partial
// decompositions, simplices and chains alike; the ordering operators give the
// canonical order used for deduplication.
class ElementSet {
 public:
  ElementSet() = default;
  ElementSet(std::initializer_list<Element> members);
  explicit ElementSet(std::vector<Element> members);

  static ElementSet from_bits(const Bitset& bits);
  // Caller guarantees `members` is strictly increasing.
  static ElementSet from_sorted(std::vector<Element> members);

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  Element operator[](std::size_t i) const { return members_[i]; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  Element front() const { return members_.front(); }
  Element back() const { return members_.back(); }
  std::span<const Element> members() const { return members_; }
  const std::vector<Element>& vec() const { return members_; }

  bool contains(Element x) const {
    return std::binary_search(members_.begin(), members_.end(), x);
  }
  // Superset test: every member of `other` is a member of *this.
  bool includes(const ElementSet& other) const {
    return std::includes(members_.begin(), members_.end(), other.members_.begin(),
                         other.members_.end());
  }
  ElementSet united(const ElementSet& other) const;
  ElementSet without(Element x) const;

  Bitset to_bits(std::size_t universe) const;
  // Subset selected by the low bits of `mask` (bit i selects members_[i]).
  ElementSet select(std::uint64_t mask) const;

  std::string to_string() const;

  friend auto operator<=>(const ElementSet&, const ElementSet&) = default;
  friend bool operator==(const ElementSet&, const ElementSet&) = default;

 private:
  std::vector<Element> members_;
};

std::ostream& operator<<(std::ostream& os, const ElementSet& s);

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const noexcept;
};

// Sorts and removes duplicates in place.
void canonicalize(std::vector<ElementSet>& sets);

}  // namespace cbpd
