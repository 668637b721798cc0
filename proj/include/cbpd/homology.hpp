#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cbpd/complex.hpp"
#include "cbpd/integer_matrix.hpp"

namespace cbpd {

// ∂_k from k-faces to (k-1)-faces of an indexed complex, 1 <= k <= dim.
// Orientation follows the sorted vertex order: the face omitting position i
// receives sign (-1)^i.
IntegerMatrix boundary_matrix(const FaceIndex& faces, int k);
IntegerMatrix boundary_matrix(const SimplicialComplex& complex, int k);

// Augmentation C_0 -> Z as a 1 x f_0 row of ones.
IntegerMatrix augmentation_matrix(const FaceIndex& faces);

// True when a * b is the zero matrix.
bool composes_to_zero(const IntegerMatrix& a, const IntegerMatrix& b);

struct HomologyGroup {
  std::size_t rank = 0;
  std::vector<Integer> torsion;
  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

// Reduced integral homology in degrees 0..dim. The empty complex has no
// degrees and sets `empty_complex` (its reduced homology is Z in degree -1).
struct HomologyResult {
  bool empty_complex = false;
  std::vector<HomologyGroup> groups;

  std::vector<std::size_t> betti() const;
  bool torsion_free() const;
  // Degrees with non-zero rank or torsion.
  std::vector<int> support() const;
  const HomologyGroup& operator[](int k) const { return groups.at(static_cast<std::size_t>(k)); }

  friend bool operator==(const HomologyResult&, const HomologyResult&) = default;
};

// Equal in every degree, missing degrees counting as zero groups.
bool same_homology(const HomologyResult& a, const HomologyResult& b);

// Throws std::logic_error if some ∂_{k-1} ∘ ∂_k is non-zero.
HomologyResult integral_homology(const SimplicialComplex& complex);

// Reduced Betti numbers with coefficients in the field of p elements.
// Throws InputError when p is not prime.
std::vector<std::size_t> betti_mod_p(const SimplicialComplex& complex, std::uint64_t p);

// `H~<k> rank=<r> torsion=<d1,d2,...>` per degree, torsion omitted when empty.
std::string format_report(const HomologyResult& result);
HomologyResult parse_report(const std::string& text);

using VertexMap = std::function<Vertex(Vertex)>;

// Chain map of a simplicial map, one matrix per degree 0..dim(domain), with
// rows indexed by faces of the codomain. A simplex whose image repeats a
// vertex maps to 0; otherwise the sign is that of the sorting permutation.
// Throws InputError naming a simplex whose image is not a face, and
// std::logic_error if the result fails to commute with the boundaries.
std::vector<IntegerMatrix> chain_map_from_vertex_map(const SimplicialComplex& domain,
                                                     const SimplicialComplex& codomain,
                                                     const VertexMap& f);

struct DegreeIso {
  std::size_t dim_domain = 0;
  std::size_t dim_codomain = 0;
  std::size_t rank_map = 0;
  bool iso = false;
};

struct IsoVerdict {
  std::vector<DegreeIso> degrees;
  bool iso = false;
};

// Compares the induced map on reduced homology with coefficients in two
// random 62-bit prime fields; the rank data must agree between them. Throws
// ResourceError when more than `entry_budget` non-zero entries would be held.
IsoVerdict homology_map_is_iso(const SimplicialComplex& domain, const SimplicialComplex& codomain,
                               const VertexMap& f, std::size_t entry_budget = 50'000'000);

}  // namespace cbpd
