#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cbpd/element_set.hpp"

namespace cbpd {

// GF(q)^dim for a prime q, vectors encoded as integers with coordinate j the
// base-q digit of weight q^j.
class PrimeVectorSpace {
 public:
  // Throws InputError unless q is prime and dim >= 1; ResourceError when q^dim
  // exceeds `max_vectors`.
  PrimeVectorSpace(std::uint32_t q, std::size_t dim, std::size_t max_vectors = std::size_t{1} << 22);

  std::uint32_t q() const { return q_; }
  std::size_t dim() const { return dim_; }
  std::uint32_t size() const { return size_; }

  std::vector<std::uint32_t> decode(std::uint32_t code) const;
  std::uint32_t encode(const std::vector<std::uint32_t>& coords) const;
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t scale(std::uint32_t c, std::uint32_t a) const;

  // All vectors in the span, as a bitset over codes.
  Bitset span(const std::vector<std::uint32_t>& generators) const;
  std::string digits(std::uint32_t code) const;

 private:
  std::uint32_t q_;
  std::size_t dim_;
  std::uint32_t size_;
};

struct Subspace {
  std::size_t dim = 0;
  // Reduced row-echelon basis; the pivot of each row is its first non-zero
  // coordinate and equals 1.
  std::vector<std::uint32_t> basis;
  Bitset vectors;
};

// Number of subspaces of dimension k in GF(q)^n.
double gaussian_binomial(std::uint32_t q, std::size_t n, std::size_t k);

// Every subspace with dimension in [kmin, kmax], ordered by dimension and then
// by reduced row-echelon basis. Throws ResourceError beyond `budget` subspaces.
std::vector<Subspace> enumerate_subspaces(const PrimeVectorSpace& space, std::size_t kmin,
                                          std::size_t kmax, std::size_t budget);

std::string subspace_label(const PrimeVectorSpace& space, const Subspace& s);

}  // namespace cbpd
