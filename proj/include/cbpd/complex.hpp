#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cbpd/element_set.hpp"

namespace cbpd {

using Vertex = Element;

// Finite abstract simplicial complex given by its facets. Facets are kept
// sorted, duplicate-free and inclusion-maximal.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  SimplicialComplex(std::size_t num_vertices, std::vector<ElementSet> facets);

  std::size_t num_vertices() const { return num_vertices_; }
  const std::vector<ElementSet>& facets() const { return facets_; }
  bool empty() const { return facets_.empty(); }
  // -1 for the empty complex.
  int dimension() const;
  bool contains_face(const ElementSet& face) const;

 private:
  std::size_t num_vertices_ = 0;
  std::vector<ElementSet> facets_;
};

// All faces of a complex grouped by dimension. Faces of each dimension are
// sorted lexicographically and indexed by position; indices are stable for a
// given complex regardless of how it was built.
class FaceIndex {
 public:
  // Throws ResourceError when the facet subsets to enumerate exceed `budget`.
  explicit FaceIndex(const SimplicialComplex& complex, std::size_t budget = 60'000'000);

  int dimension() const { return static_cast<int>(tables_.size()) - 1; }
  std::size_t count(int k) const;
  std::span<const Vertex> face(int k, std::size_t i) const;
  std::optional<std::size_t> index_of(std::span<const Vertex> face) const;
  std::vector<std::size_t> f_vector() const;
  std::size_t total() const;

 private:
  struct Table {
    std::size_t width = 0;
    std::vector<Vertex> data;
  };
  std::vector<Table> tables_;
};

// Order complex of the face poset. Vertex ids of the result enumerate the
// faces of `complex` dimension by dimension, following FaceIndex order.
SimplicialComplex barycentric_subdivision(const SimplicialComplex& complex);

}  // namespace cbpd
