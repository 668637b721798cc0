#include "cbpd/element_set.hpp"

#include <ostream>
#include <sstream>

namespace cbpd {

ElementSet::ElementSet(std::initializer_list<Element> members)
    : ElementSet(std::vector<Element>(members)) {}

ElementSet::ElementSet(std::vector<Element> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

ElementSet ElementSet::from_bits(const Bitset& bits) {
  std::vector<Element> out;
  out.reserve(bits.count());
  for (auto i = bits.find_first(); i != Bitset::npos; i = bits.find_next(i)) {
    out.push_back(static_cast<Element>(i));
  }
  return from_sorted(std::move(out));
}

ElementSet ElementSet::from_sorted(std::vector<Element> members) {
  ElementSet s;
  s.members_ = std::move(members);
  return s;
}

ElementSet ElementSet::united(const ElementSet& other) const {
  std::vector<Element> out;
  out.reserve(size() + other.size());
  std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                 other.members_.end(), std::back_inserter(out));
  return from_sorted(std::move(out));
}

ElementSet ElementSet::without(Element x) const {
  std::vector<Element> out;
  out.reserve(size());
  for (Element y : members_) {
    if (y != x) out.push_back(y);
  }
  return from_sorted(std::move(out));
}

Bitset ElementSet::to_bits(std::size_t universe) const {
  Bitset bits(universe);
  for (Element x : members_) bits.set(x);
  return bits;
}

ElementSet ElementSet::select(std::uint64_t mask) const {
  std::vector<Element> out;
  for (std::size_t i = 0; i < members_.size() && mask != 0; ++i, mask >>= 1) {
    if (mask & 1U) out.push_back(members_[i]);
  }
  return from_sorted(std::move(out));
}

std::string ElementSet::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ElementSet& s) {
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ',';
    os << s[i];
  }
  return os << '}';
}

std::size_t ElementSetHash::operator()(const ElementSet& s) const noexcept {
  // FNV-1a over the member words.
  std::uint64_t h = 1469598103934665603ULL;
  for (Element x : s) {
    h ^= x;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

void canonicalize(std::vector<ElementSet>& sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
}

}  // namespace cbpd
