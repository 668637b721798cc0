#pragma once

#include <string>
#include <vector>

#include "cbpd/complex.hpp"
#include "cbpd/element_set.hpp"
#include "cbpd/frames.hpp"
#include "cbpd/poset.hpp"

namespace cbpd {

// Line formats; '#' starts a comment line and blank lines are ignored.
//   POSET <n> / LABEL <i> <token> / COVER <i> <j>
//   FRAME <i1> <i2> ... (ascending)
//   facet files: ascending vertex indices separated by single spaces
std::string write_poset(const FinitePoset& poset);
FinitePoset parse_poset(const std::string& text);

std::string write_frames(const std::vector<ElementSet>& frames);
std::vector<ElementSet> parse_frames(const std::string& text, std::size_t poset_size);

std::string write_facets(const SimplicialComplex& complex);
SimplicialComplex parse_facets(const std::string& text);

// Refinement poset with members labelled by their ambient indices.
std::string write_decomposition_poset(const DecompositionPoset& poset);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace cbpd
