#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cbpd/element_set.hpp"
#include "cbpd/frames.hpp"
#include "cbpd/gf.hpp"
#include "cbpd/integer_matrix.hpp"
#include "cbpd/poset.hpp"

namespace cbpd {

inline constexpr std::size_t kDefaultElementBudget = 200'000;

// A poset together with its designated frame family.
struct Instance {
  std::string name;
  std::shared_ptr<const FinitePoset> poset;
  std::shared_ptr<const FrameFamily> family;
  // Set when every Σ(τ) is the face poset of an n-dimensional cross polytope.
  std::optional<std::size_t> cross_polytope_rank;
  // Rank of the single non-vanishing reduced homology group of CB, when known.
  std::optional<Integer> expected_top_rank;
};

// Closed-form dimensions known for the instance beyond the generic bounds:
// 3^n - 2 for CB and 4n - 3 for PD in the cross polytope case.
std::vector<DimensionCheck> closed_form_checks(const Instance& instance, const DimensionReport& report);

struct SubspaceInstance : Instance {
  std::uint32_t q = 0;
  std::size_t n = 0;
  std::vector<Subspace> subspaces;
};

// Proper non-zero subspaces of GF(q)^n ordered by containment; frames are the
// unordered n-sets of lines spanning the space.
SubspaceInstance subspace_provider(std::uint32_t q, std::size_t n,
                                   std::size_t budget = kDefaultElementBudget);

struct MatroidSpec {
  enum class Kind { uniform, free, bases };
  Kind kind = Kind::free;
  std::size_t n = 0;  // ground set size
  std::size_t k = 0;  // rank of a uniform matroid
  std::vector<ElementSet> bases;

  static MatroidSpec uniform(std::size_t n, std::size_t k);
  static MatroidSpec free(std::size_t n);
  static MatroidSpec from_bases(std::size_t ground, std::vector<ElementSet> bases);
};

struct MatroidInstance : Instance {
  std::size_t ground = 0;
  std::size_t rank = 0;
  std::vector<std::uint32_t> bases;  // as bit masks over the ground set
  std::vector<std::uint32_t> flats;  // mask of each poset element

  std::size_t rank_of(std::uint32_t mask) const;
  // Poset element whose flat is exactly `subset`, if it is a proper flat.
  std::optional<Element> element_of(const ElementSet& subset) const;
};

// Proper flats (excluding the closure of the empty set and the ground set)
// ordered by containment; frames are the sets of rank-one flats whose
// transversals are bases. With `paranoid` every transversal is tested on
// ground sets of at most 8 elements.
MatroidInstance matroid_provider(const MatroidSpec& spec, bool paranoid = true,
                                 std::size_t budget = kDefaultElementBudget);

// `BASIS i j ...` lines with an optional `GROUND g` line; '#' comments.
MatroidSpec parse_bases(const std::string& text);

struct SymplecticInstance : Instance {
  std::uint32_t q = 0;
  std::size_t n = 0;
  std::vector<Subspace> subspaces;
};

// Non-zero totally isotropic subspaces of GF(q)^{2n} under
// Ψ(x, y) = Σ x_i y_{n+i} - x_{n+i} y_i; frames are the line sets of
// symplectic bases. Every Σ(τ) is checked against the boundary of the
// n-dimensional cross polytope.
SymplecticInstance symplectic_provider(std::uint32_t q, std::size_t n,
                                       std::size_t budget = kDefaultElementBudget);

// |GL_n(q)| / (n (q^n - 1)).
Integer expected_top_rank(std::uint32_t q, std::size_t n);
Integer general_linear_order(std::uint32_t q, std::size_t n);
Integer symplectic_group_order(std::uint32_t q, std::size_t n);

}  // namespace cbpd
