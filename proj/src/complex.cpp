#include "cbpd/complex.hpp"

#include <algorithm>
#include <numeric>

#include "cbpd/errors.hpp"

namespace cbpd {

SimplicialComplex::SimplicialComplex(std::size_t num_vertices, std::vector<ElementSet> facets)
    : num_vertices_(num_vertices) {
  std::erase_if(facets, [](const ElementSet& f) { return f.empty(); });
  for (const auto& f : facets) {
    if (f.back() >= num_vertices) {
      throw InputError("facet " + f.to_string() + " mentions a vertex >= " +
                       std::to_string(num_vertices));
    }
  }
  canonicalize(facets);
  // Containment only happens between facets of different sizes; test each
  // candidate against strictly larger facets sharing its first vertex.
  std::vector<std::size_t> order(facets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return facets[a].size() > facets[b].size();
  });
  std::vector<std::vector<std::size_t>> by_vertex(num_vertices);
  std::vector<bool> keep(facets.size(), false);
  for (std::size_t idx : order) {
    const ElementSet& f = facets[idx];
    bool contained = false;
    // Lists are filled in order of decreasing facet size.
    for (std::size_t big : by_vertex[f.front()]) {
      if (facets[big].size() <= f.size()) break;
      if (facets[big].includes(f)) {
        contained = true;
        break;
      }
    }
    if (contained) continue;
    keep[idx] = true;
    for (Vertex v : f) by_vertex[v].push_back(idx);
  }
  for (std::size_t i = 0; i < facets.size(); ++i) {
    if (keep[i]) facets_.push_back(std::move(facets[i]));
  }
}

int SimplicialComplex::dimension() const {
  int dim = -1;
  for (const auto& f : facets_) dim = std::max(dim, static_cast<int>(f.size()) - 1);
  return dim;
}

bool SimplicialComplex::contains_face(const ElementSet& face) const {
  if (face.empty()) return true;
  return std::any_of(facets_.begin(), facets_.end(),
                     [&](const ElementSet& f) { return f.includes(face); });
}

namespace {

bool lex_less(std::span<const Vertex> a, std::span<const Vertex> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

FaceIndex::FaceIndex(const SimplicialComplex& complex, std::size_t budget) {
  const int dim = complex.dimension();
  if (dim < 0) return;
  std::size_t subsets = 0;
  for (const auto& f : complex.facets()) {
    if (f.size() >= 40) throw ResourceError("facet too large to enumerate faces");
    subsets += (std::size_t{1} << f.size()) - 1;
    if (subsets > budget) {
      throw ResourceError("face enumeration exceeds budget of " + std::to_string(budget) +
                          " subsets");
    }
  }
  tables_.resize(static_cast<std::size_t>(dim) + 1);
  for (int k = 0; k <= dim; ++k) tables_[k].width = static_cast<std::size_t>(k) + 1;

  std::vector<Vertex> buf;
  for (const auto& f : complex.facets()) {
    const std::uint64_t full = (std::uint64_t{1} << f.size()) - 1;
    for (std::uint64_t mask = 1; mask <= full; ++mask) {
      buf.clear();
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (mask >> i & 1U) buf.push_back(f[i]);
      }
      auto& t = tables_[buf.size() - 1];
      t.data.insert(t.data.end(), buf.begin(), buf.end());
    }
  }

  // Sort and deduplicate each table through an index permutation.
  for (auto& t : tables_) {
    const std::size_t w = t.width;
    const std::size_t n = t.data.size() / w;
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    auto row = [&](std::uint32_t i) { return std::span<const Vertex>(t.data.data() + i * w, w); };
    std::sort(perm.begin(), perm.end(),
              [&](std::uint32_t a, std::uint32_t b) { return lex_less(row(a), row(b)); });
    std::vector<Vertex> out;
    out.reserve(t.data.size());
    std::span<const Vertex> prev;
    for (std::uint32_t i : perm) {
      auto r = row(i);
      if (!prev.empty() && std::equal(r.begin(), r.end(), prev.begin())) continue;
      out.insert(out.end(), r.begin(), r.end());
      prev = std::span<const Vertex>(out.data() + out.size() - w, w);
    }
    t.data = std::move(out);
    t.data.shrink_to_fit();
  }
}

std::size_t FaceIndex::count(int k) const {
  if (k < 0 || k > dimension()) return 0;
  return tables_[k].data.size() / tables_[k].width;
}

std::span<const Vertex> FaceIndex::face(int k, std::size_t i) const {
  const auto& t = tables_.at(static_cast<std::size_t>(k));
  return {t.data.data() + i * t.width, t.width};
}

std::optional<std::size_t> FaceIndex::index_of(std::span<const Vertex> f) const {
  if (f.empty() || f.size() > tables_.size()) return std::nullopt;
  const int k = static_cast<int>(f.size()) - 1;
  std::size_t lo = 0;
  std::size_t hi = count(k);
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (lex_less(face(k, mid), f)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < count(k)) {
    auto cand = face(k, lo);
    if (std::equal(cand.begin(), cand.end(), f.begin(), f.end())) return lo;
  }
  return std::nullopt;
}

std::vector<std::size_t> FaceIndex::f_vector() const {
  std::vector<std::size_t> f;
  for (int k = 0; k <= dimension(); ++k) f.push_back(count(k));
  return f;
}

std::size_t FaceIndex::total() const {
  std::size_t n = 0;
  for (int k = 0; k <= dimension(); ++k) n += count(k);
  return n;
}

SimplicialComplex barycentric_subdivision(const SimplicialComplex& complex) {
  FaceIndex faces(complex);
  std::vector<std::size_t> offset(static_cast<std::size_t>(faces.dimension()) + 2, 0);
  for (int k = 0; k <= faces.dimension(); ++k) offset[k + 1] = offset[k] + faces.count(k);

  // Each facet contributes one maximal flag per ordering of its vertices.
  std::vector<ElementSet> flags;
  for (const auto& facet : complex.facets()) {
    std::vector<Vertex> perm(facet.begin(), facet.end());
    do {
      std::vector<Element> flag;
      std::vector<Vertex> prefix;
      for (Vertex v : perm) {
        prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), v), v);
        const int k = static_cast<int>(prefix.size()) - 1;
        flag.push_back(static_cast<Element>(offset[k] + *faces.index_of(prefix)));
      }
      flags.emplace_back(std::move(flag));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return SimplicialComplex(faces.total(), std::move(flags));
}

}  // namespace cbpd
