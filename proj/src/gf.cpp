#include "cbpd/gf.hpp"

#include <cmath>

#include "cbpd/errors.hpp"
#include "cbpd/modular.hpp"

namespace cbpd {

PrimeVectorSpace::PrimeVectorSpace(std::uint32_t q, std::size_t dim, std::size_t max_vectors)
    : q_(q), dim_(dim), size_(1) {
  if (!is_prime(q)) throw InputError("field order " + std::to_string(q) + " is not prime");
  if (dim == 0) throw InputError("vector space dimension must be positive");
  std::size_t size = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    size *= q;
    if (size > max_vectors) {
      throw ResourceError("GF(" + std::to_string(q) + ")^" + std::to_string(dim) +
                          " exceeds the vector budget");
    }
  }
  size_ = static_cast<std::uint32_t>(size);
}

std::vector<std::uint32_t> PrimeVectorSpace::decode(std::uint32_t code) const {
  std::vector<std::uint32_t> v(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    v[j] = code % q_;
    code /= q_;
  }
  return v;
}

std::uint32_t PrimeVectorSpace::encode(const std::vector<std::uint32_t>& coords) const {
  std::uint32_t code = 0;
  for (std::size_t j = dim_; j-- > 0;) code = code * q_ + coords[j] % q_;
  return code;
}

std::uint32_t PrimeVectorSpace::add(std::uint32_t a, std::uint32_t b) const {
  std::uint32_t out = 0;
  std::uint32_t weight = 1;
  for (std::size_t j = 0; j < dim_; ++j) {
    out += ((a % q_ + b % q_) % q_) * weight;
    a /= q_;
    b /= q_;
    weight *= q_;
  }
  return out;
}

std::uint32_t PrimeVectorSpace::scale(std::uint32_t c, std::uint32_t a) const {
  std::uint32_t out = 0;
  std::uint32_t weight = 1;
  for (std::size_t j = 0; j < dim_; ++j) {
    out += (c % q_) * (a % q_) % q_ * weight;
    a /= q_;
    weight *= q_;
  }
  return out;
}

Bitset PrimeVectorSpace::span(const std::vector<std::uint32_t>& generators) const {
  Bitset bits(size_);
  std::vector<std::uint32_t> current{0};
  bits.set(0);
  for (std::uint32_t g : generators) {
    if (bits.test(g)) continue;
    const std::size_t before = current.size();
    for (std::uint32_t c = 1; c < q_; ++c) {
      const std::uint32_t step = scale(c, g);
      for (std::size_t i = 0; i < before; ++i) {
        const std::uint32_t v = add(current[i], step);
        if (!bits.test(v)) {
          bits.set(v);
          current.push_back(v);
        }
      }
    }
  }
  return bits;
}

std::string PrimeVectorSpace::digits(std::uint32_t code) const {
  std::string s;
  for (std::uint32_t d : decode(code)) s += static_cast<char>('0' + d);
  return s;
}

double gaussian_binomial(std::uint32_t q, std::size_t n, std::size_t k) {
  if (k > n) return 0;
  double num = 1;
  for (std::size_t i = 0; i < k; ++i) {
    num *= (std::pow(q, static_cast<double>(n - i)) - 1) / (std::pow(q, static_cast<double>(i + 1)) - 1);
  }
  return std::round(num);
}

namespace {

void rref_for_pivots(const PrimeVectorSpace& space, const std::vector<std::size_t>& pivots,
                     std::vector<Subspace>& out) {
  const std::size_t n = space.dim();
  const std::size_t k = pivots.size();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  // Free slots: row i, non-pivot column j > pivot i.
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = pivots[i] + 1; j < n; ++j) {
      if (!is_pivot[j]) slots.emplace_back(i, j);
    }
  }
  std::vector<std::uint32_t> values(slots.size(), 0);
  while (true) {
    std::vector<std::vector<std::uint32_t>> rows(k, std::vector<std::uint32_t>(n, 0));
    for (std::size_t i = 0; i < k; ++i) rows[i][pivots[i]] = 1;
    for (std::size_t s = 0; s < slots.size(); ++s) rows[slots[s].first][slots[s].second] = values[s];
    Subspace sub;
    sub.dim = k;
    for (const auto& r : rows) sub.basis.push_back(space.encode(r));
    sub.vectors = space.span(sub.basis);
    out.push_back(std::move(sub));
    std::size_t pos = slots.size();
    while (pos > 0 && values[pos - 1] + 1 == space.q()) values[--pos] = 0;
    if (pos == 0) break;
    ++values[pos - 1];
  }
}

}  // namespace

std::vector<Subspace> enumerate_subspaces(const PrimeVectorSpace& space, std::size_t kmin,
                                          std::size_t kmax, std::size_t budget) {
  double expected = 0;
  for (std::size_t k = kmin; k <= kmax; ++k) expected += gaussian_binomial(space.q(), space.dim(), k);
  if (expected > static_cast<double>(budget)) {
    throw ResourceError("subspace enumeration needs " + std::to_string(static_cast<long long>(expected)) +
                        " elements, above the budget of " + std::to_string(budget));
  }
  std::vector<Subspace> out;
  for (std::size_t k = kmin; k <= kmax; ++k) {
    std::vector<std::size_t> pivots(k);
    for (std::size_t i = 0; i < k; ++i) pivots[i] = i;
    while (true) {
      rref_for_pivots(space, pivots, out);
      std::size_t i = k;
      while (i > 0 && pivots[i - 1] == space.dim() - k + i - 1) --i;
      if (i == 0) break;
      ++pivots[i - 1];
      for (std::size_t j = i; j < k; ++j) pivots[j] = pivots[j - 1] + 1;
    }
  }
  return out;
}

std::string subspace_label(const PrimeVectorSpace& space, const Subspace& s) {
  std::string label;
  for (std::size_t i = 0; i < s.basis.size(); ++i) {
    if (i) label += '|';
    label += space.digits(s.basis[i]);
  }
  return label;
}

}  // namespace cbpd
