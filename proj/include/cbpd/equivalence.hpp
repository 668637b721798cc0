#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cbpd/complex.hpp"
#include "cbpd/element_set.hpp"
#include "cbpd/frames.hpp"
#include "cbpd/homology.hpp"
#include "cbpd/poset.hpp"

namespace cbpd {

// A strictly increasing sequence of links, each a set of ambient elements:
// faces of CB ordered by inclusion, or members of PD ordered by refinement.
struct ChainInPoset {
  std::vector<ElementSet> links;
  friend bool operator==(const ChainInPoset&, const ChainInPoset&) = default;
};

// Every meet of a non-empty subset of sigma that exists in the poset.
ElementSet closure(const FinitePoset& poset, const ElementSet& sigma);

// Throws InputError unless each link is a face of CB and each link strictly
// contains the previous one.
void validate_cb_chain(const FrameFamily& family, const ChainInPoset& chain);
// Throws InputError unless each link is a partial decomposition and the links
// strictly increase under refinement.
void validate_pd_chain(const FrameFamily& family, const ChainInPoset& chain);

// max of the union of min(Cl(σ)) over the links σ of a chain of CB faces.
ElementSet map_m(const FrameFamily& family, const ChainInPoset& chain);

struct UResult {
  ElementSet set;
  bool is_face = false;
};

// Union of the links of a chain in PD, flagged by whether it is a CB face.
UResult map_u(const FrameFamily& family, const ChainInPoset& chain);

struct BoundViolation {
  // 1: u after Δm exceeds Cl of the top face; 2: m after Δu is not above the
  // bottom of the smallest chain. 0 marks an ill-defined composite.
  int inequality = 0;
  std::vector<ChainInPoset> chain_of_chains;
  std::string detail;

  friend auto operator<=>(const BoundViolation& a, const BoundViolation& b) {
    if (a.inequality != b.inequality) return a.inequality <=> b.inequality;
    if (a.chain_of_chains.size() != b.chain_of_chains.size()) {
      return a.chain_of_chains.size() <=> b.chain_of_chains.size();
    }
    for (std::size_t i = 0; i < a.chain_of_chains.size(); ++i) {
      if (auto c = a.chain_of_chains[i].links <=> b.chain_of_chains[i].links; c != 0) return c;
    }
    return a.detail <=> b.detail;
  }
  friend bool operator==(const BoundViolation&, const BoundViolation&) = default;
};

struct BoundsReport {
  bool exhaustive = false;
  std::uint64_t seed = 0;
  std::size_t checked_cb = 0;
  std::size_t checked_pd = 0;
  std::vector<BoundViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Exhaustive over both double subdivisions when CB has at most
// `exhaustive_limit` faces (or when forced), otherwise sampled.
BoundsReport verify_composite_bounds(const FrameFamily& family, const DecompositionPoset& pd,
                                     std::optional<SampleSpec> sample = std::nullopt,
                                     std::size_t exhaustive_limit = 64);

struct MapCheckReport {
  bool ok = true;
  std::size_t checked = 0;
  std::optional<ChainInPoset> witness;
  std::string detail;
};

// m(c) lies in PD with P1 and P2 for a frame witnessing the top face of c, and
// m(c') refines m(c) for every sub-chain c' of c. Exhaustive over chains of CB
// faces unless sampled.
MapCheckReport check_m_in_pd(const FrameFamily& family, const DecompositionPoset& pd,
                             std::optional<SampleSpec> sample = std::nullopt);

// u(c) is a CB face for every chain c of PD; the first failure is returned as
// a witness. Exhaustive unless sampled.
MapCheckReport check_u_total(const FrameFamily& family, const DecompositionPoset& pd,
                             std::optional<SampleSpec> sample = std::nullopt);

enum class InducedMap { m, u };

// Simplicial map induced on order complexes: for u, Δ(ΔPD) -> Δ(CB); for m,
// Δ(ΔCB) -> Δ(PD). Throws ResourceError when the domain would hold more than
// `face_budget` faces, and InputError when the map is undefined.
IsoVerdict induced_homology_iso(const FrameFamily& family, const DecompositionPoset& pd,
                                InducedMap which, std::size_t face_budget = 5'000'000);

}  // namespace cbpd
