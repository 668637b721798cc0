#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cbpd/complex.hpp"
#include "cbpd/element_set.hpp"
#include "cbpd/poset.hpp"

namespace cbpd {

// Σ(τ): every element of the poset that is the join of a non-empty subset of
// `tau`. Contains `tau` itself.
ElementSet sigma_of(const FinitePoset& poset, const ElementSet& tau);

struct FrameVerdict {
  bool valid = false;
  std::string reason;
  // Two comparable members of tau (antichain failure), or a pair of Σ(τ)
  // elements with a common lower bound but no meet inside Σ(τ).
  std::optional<std::pair<Element, Element>> witness;
};

// Antichain test plus the meet-closure condition on Σ(τ). Pairs suffice: a
// subset with a common lower bound has its meet built up pairwise.
FrameVerdict validate_frame(const FinitePoset& poset, const ElementSet& tau);

struct Properties {
  bool p1 = false;  // every member of sigma lies in Σ(τ)
  bool p2 = false;  // every member of tau is below at most one member of sigma
  bool p3 = false;  // every member of tau is below at least one member of sigma

  friend bool operator==(const Properties&, const Properties&) = default;
};

Properties check_properties(const FinitePoset& poset, const ElementSet& sigma, const ElementSet& tau);

// A validated, duplicate-free, non-empty family of frames over a poset, with
// Σ(τ) cached per frame.
class FrameFamily {
 public:
  // Throws InvalidFrameError naming the first frame that fails validation.
  FrameFamily(std::shared_ptr<const FinitePoset> poset, std::vector<ElementSet> frames);

  const FinitePoset& poset() const { return *poset_; }
  const std::shared_ptr<const FinitePoset>& poset_ptr() const { return poset_; }

  std::size_t size() const { return frames_.size(); }
  const ElementSet& frame(std::size_t i) const { return frames_[i]; }
  const std::vector<ElementSet>& frames() const { return frames_; }
  const ElementSet& sigma(std::size_t i) const { return sigmas_[i]; }
  const Bitset& sigma_bits(std::size_t i) const { return sigma_bits_[i]; }
  std::size_t max_frame_size() const { return max_frame_size_; }

  Properties properties(const ElementSet& sigma, std::size_t frame_index) const;
  // Frames τ with P1(sigma, τ), as a bitset over frame indices.
  Bitset p1_witnesses(const ElementSet& sigma) const;
  bool is_basis_compatible(const ElementSet& sigma) const;
  bool is_partial_decomposition(const ElementSet& sigma) const;
  bool is_decomposition(const ElementSet& sigma) const;

  // {x in τ : x <= y}.
  ElementSet support(std::size_t frame_index, Element y) const;
  // Σ(τ) is the proper part of the Boolean lattice on τ.
  bool sigma_is_boolean(std::size_t frame_index) const;

 private:
  std::shared_ptr<const FinitePoset> poset_;
  std::vector<ElementSet> frames_;
  std::vector<ElementSet> sigmas_;
  std::vector<Bitset> sigma_bits_;
  std::size_t max_frame_size_ = 0;
};

// σ <= σ' under refinement: each member of σ lies below some member of σ'.
bool refines(const FinitePoset& poset, const ElementSet& finer, const ElementSet& coarser);

// A poset whose elements are sets of ambient elements ordered by refinement.
class DecompositionPoset {
 public:
  DecompositionPoset() = default;
  DecompositionPoset(const FinitePoset& ambient, std::vector<ElementSet> members);

  std::size_t size() const { return members_.size(); }
  const ElementSet& member(std::size_t i) const { return members_[i]; }
  const std::vector<ElementSet>& members() const { return members_; }
  const FinitePoset& order() const { return order_; }
  std::optional<std::size_t> index_of(const ElementSet& s) const;
  bool contains(const ElementSet& s) const { return index_of(s).has_value(); }
  // Dimension of the order complex; -1 when empty.
  int dimension() const;

 private:
  std::vector<ElementSet> members_;
  FinitePoset order_;
  std::unordered_map<ElementSet, std::size_t, ElementSetHash> index_;
};

DecompositionPoset build_D(const FrameFamily& family);
DecompositionPoset build_PD(const FrameFamily& family);
// Facets are the inclusion-maximal Σ(τ).
SimplicialComplex build_CB(const FrameFamily& family);

struct EPReport {
  bool holds = true;
  std::optional<std::pair<ElementSet, ElementSet>> witness;
  std::size_t checked = 0;
};

struct SampleSpec {
  std::size_t samples = 10'000;
  std::uint64_t seed = 0xC0FFEE;
};

// Exhaustive over comparable pairs of PD unless `sample` is given.
EPReport check_EP(const FrameFamily& family, const DecompositionPoset& pd,
                  std::optional<SampleSpec> sample = std::nullopt);
// One frame witnessing P1 along each maximal chain of PD.
EPReport check_EP_chains(const FrameFamily& family, const DecompositionPoset& pd);

enum class CheckStatus { pass, fail, not_applicable };

struct DimensionCheck {
  std::string name;
  CheckStatus status = CheckStatus::pass;
};

struct DimensionReport {
  int dim_cb = -1;
  int dim_pd = -1;
  int dim_d = -1;
  std::size_t m = 0;
  bool ep = false;
  bool boolean_frames = false;
  std::vector<DimensionCheck> checks;
  bool bounds_ok = true;
};

DimensionReport dimension_report(const FrameFamily& family, const SimplicialComplex& cb,
                                 const DecompositionPoset& pd, const DecompositionPoset& d,
                                 bool ep_holds);

struct HeightReport {
  bool ok = true;
  std::size_t checked = 0;
  std::optional<ElementSet> witness;
};

// h(join σ) = Σ h(x) over members of σ, for every σ in PD whose join exists.
HeightReport check_height_additivity(const FrameFamily& family, const DecompositionPoset& pd);

}  // namespace cbpd
