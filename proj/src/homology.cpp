#include "cbpd/homology.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "cbpd/errors.hpp"
#include "cbpd/modular.hpp"
#include "cbpd/parallel.hpp"

namespace cbpd {

IntegerMatrix boundary_matrix(const FaceIndex& faces, int k) {
  if (k < 1 || k > faces.dimension()) {
    throw InputError("boundary degree " + std::to_string(k) + " outside 1.." +
                     std::to_string(faces.dimension()));
  }
  IntegerMatrix m(faces.count(k - 1), faces.count(k));
  std::vector<Vertex> sub(static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < faces.count(k); ++j) {
    auto f = faces.face(k, j);
    IntegerMatrix::Column col;
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::copy(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(i), sub.begin());
      std::copy(f.begin() + static_cast<std::ptrdiff_t>(i) + 1, f.end(),
                sub.begin() + static_cast<std::ptrdiff_t>(i));
      const auto row = faces.index_of(sub);
      col.push_back({static_cast<std::uint32_t>(*row), Integer(i % 2 == 0 ? 1 : -1)});
    }
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.row < b.row; });
    m.set_column(j, std::move(col));
  }
  return m;
}

IntegerMatrix boundary_matrix(const SimplicialComplex& complex, int k) {
  if (k < 1 || k > complex.dimension()) {
    throw InputError("boundary degree " + std::to_string(k) + " outside 1.." +
                     std::to_string(complex.dimension()));
  }
  return boundary_matrix(FaceIndex(complex), k);
}

IntegerMatrix augmentation_matrix(const FaceIndex& faces) {
  IntegerMatrix m(1, faces.count(0));
  for (std::size_t j = 0; j < faces.count(0); ++j) m.set_column(j, {{0, Integer(1)}});
  return m;
}

bool composes_to_zero(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("matrix product shape mismatch");
  std::vector<Integer> acc(a.rows());
  std::vector<std::uint32_t> touched;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    touched.clear();
    for (const auto& [k, y] : b.column(j)) {
      for (const auto& [i, x] : a.column(k)) {
        acc[i] += x * y;
        touched.push_back(i);
      }
    }
    bool zero = true;
    for (std::uint32_t i : touched) {
      if (acc[i] != 0) zero = false;
      acc[i] = 0;
    }
    if (!zero) return false;
  }
  return true;
}

std::vector<std::size_t> HomologyResult::betti() const {
  std::vector<std::size_t> out;
  for (const auto& g : groups) out.push_back(g.rank);
  return out;
}

bool HomologyResult::torsion_free() const {
  return std::all_of(groups.begin(), groups.end(),
                     [](const HomologyGroup& g) { return g.torsion.empty(); });
}

std::vector<int> HomologyResult::support() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (groups[k].rank != 0 || !groups[k].torsion.empty()) out.push_back(static_cast<int>(k));
  }
  return out;
}

bool same_homology(const HomologyResult& a, const HomologyResult& b) {
  if (a.empty_complex != b.empty_complex) return false;
  const HomologyGroup zero;
  for (std::size_t k = 0; k < std::max(a.groups.size(), b.groups.size()); ++k) {
    const auto& x = k < a.groups.size() ? a.groups[k] : zero;
    const auto& y = k < b.groups.size() ? b.groups[k] : zero;
    if (!(x == y)) return false;
  }
  return true;
}

namespace {

void assert_boundary_squared_zero(std::size_t vertices, const std::vector<IntegerMatrix>& d) {
  if (d.size() > 1) {
    IntegerMatrix eps(1, vertices);
    for (std::size_t v = 0; v < vertices; ++v) eps.set(0, v, Integer(1));
    if (!composes_to_zero(eps, d[1])) throw std::logic_error("augmentation composed with boundary is non-zero");
  }
  for (std::size_t k = 2; k < d.size(); ++k) {
    if (!composes_to_zero(d[k - 1], d[k])) {
      throw std::logic_error("boundary squared is non-zero in degree " + std::to_string(k));
    }
  }
}

// Chain complex of the subcomplex left after elementary collapses, which has
// the homotopy type of the original.
struct CollapsedChains {
  std::vector<std::size_t> counts;
  std::vector<IntegerMatrix> d;  // d[k] for 1 <= k <= dim; d[0] unused
};

CollapsedChains collapse(const FaceIndex& faces) {
  const int dim = faces.dimension();
  const auto top = static_cast<std::size_t>(dim);
  // facets[k][i * (k + 1) + j]: face (k, i) without its j-th vertex.
  std::vector<std::vector<std::uint32_t>> facets(top + 1);
  for (int k = 1; k <= dim; ++k) {
    auto& fk = facets[k];
    fk.resize(faces.count(k) * (k + 1));
    parallel_for(faces.count(k), [&](std::size_t i) {
      std::vector<Vertex> sub(static_cast<std::size_t>(k));
      auto f = faces.face(k, i);
      for (std::size_t j = 0; j < f.size(); ++j) {
        std::copy(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(j), sub.begin());
        std::copy(f.begin() + static_cast<std::ptrdiff_t>(j) + 1, f.end(), sub.begin() + static_cast<std::ptrdiff_t>(j));
        fk[i * (k + 1) + j] = static_cast<std::uint32_t>(*faces.index_of(sub));
      }
    });
  }
  // Alive cofaces of each face: their number and the sum of their indices, so
  // the last one left is known without storing coface lists.
  std::vector<std::vector<std::uint32_t>> cofaces(top + 1);
  std::vector<std::vector<std::uint64_t>> coface_sum(top + 1);
  std::vector<std::vector<char>> alive(top + 1);
  for (int k = 0; k <= dim; ++k) {
    cofaces[k].assign(faces.count(k), 0);
    coface_sum[k].assign(faces.count(k), 0);
    alive[k].assign(faces.count(k), 1);
  }
  for (int k = 1; k <= dim; ++k) {
    for (std::size_t i = 0; i < faces.count(k); ++i) {
      for (int j = 0; j <= k; ++j) {
        const auto r = facets[k][i * (k + 1) + j];
        ++cofaces[k - 1][r];
        coface_sum[k - 1][r] += i;
      }
    }
  }
  std::vector<std::pair<int, std::uint32_t>> free_faces;
  for (int k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < faces.count(k); ++i) {
      if (cofaces[k][i] == 1) free_faces.emplace_back(k, static_cast<std::uint32_t>(i));
    }
  }
  auto drop = [&](int k, std::uint32_t i) {
    alive[k][i] = 0;
    if (k == 0) return;
    for (int j = 0; j <= k; ++j) {
      const auto r = facets[k][i * (k + 1) + j];
      if (!alive[k - 1][r]) continue;
      --cofaces[k - 1][r];
      coface_sum[k - 1][r] -= i;
      if (cofaces[k - 1][r] == 1) free_faces.emplace_back(k - 1, r);
    }
  };
  while (!free_faces.empty()) {
    const auto [k, i] = free_faces.back();
    free_faces.pop_back();
    if (!alive[k][i] || cofaces[k][i] != 1) continue;
    const auto t = static_cast<std::uint32_t>(coface_sum[k][i]);
    // Remove the coface first so it no longer counts against its facets.
    drop(k + 1, t);
    drop(k, i);
  }

  CollapsedChains out;
  out.counts.assign(top + 1, 0);
  std::vector<std::vector<std::uint32_t>> renumber(top + 1);
  for (int k = 0; k <= dim; ++k) {
    renumber[k].assign(faces.count(k), 0);
    for (std::size_t i = 0; i < faces.count(k); ++i) {
      if (alive[k][i]) renumber[k][i] = static_cast<std::uint32_t>(out.counts[k]++);
    }
  }
  out.d.resize(top + 1);
  for (int k = 1; k <= dim; ++k) {
    IntegerMatrix m(out.counts[k - 1], out.counts[k]);
    for (std::size_t i = 0; i < faces.count(k); ++i) {
      if (!alive[k][i]) continue;
      IntegerMatrix::Column col;
      for (int j = 0; j <= k; ++j) {
        const auto r = facets[k][i * (k + 1) + j];
        col.push_back({renumber[k - 1][r], Integer(j % 2 == 0 ? 1 : -1)});
      }
      std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.row < b.row; });
      m.set_column(renumber[k][i], std::move(col));
    }
    out.d[k] = std::move(m);
  }
  assert_boundary_squared_zero(out.counts[0], out.d);
  return out;
}

}  // namespace

HomologyResult integral_homology(const SimplicialComplex& complex) {
  HomologyResult result;
  if (complex.empty()) {
    result.empty_complex = true;
    return result;
  }
  const FaceIndex faces(complex);
  const int dim = faces.dimension();
  const auto chains = collapse(faces);
  std::vector<SmithResult> snf(static_cast<std::size_t>(dim) + 2);
  snf[0].rank = 1;
  snf[0].invariant_factors = {Integer(1)};
  parallel_for(static_cast<std::size_t>(dim),
               [&](std::size_t i) { snf[i + 1] = smith_normal_form(chains.d[i + 1]); });
  result.groups.resize(static_cast<std::size_t>(dim) + 1);
  for (int k = 0; k <= dim; ++k) {
    auto& g = result.groups[k];
    g.rank = chains.counts[k] - snf[k].rank - snf[k + 1].rank;
    g.torsion = snf[k + 1].torsion();
  }
  return result;
}

std::vector<std::size_t> betti_mod_p(const SimplicialComplex& complex, std::uint64_t p) {
  if (!is_prime(p)) throw InputError("modulus " + std::to_string(p) + " is not prime");
  if (complex.empty()) return {};
  const FaceIndex faces(complex);
  const int dim = faces.dimension();
  const auto chains = collapse(faces);
  std::vector<std::size_t> rank(static_cast<std::size_t>(dim) + 2, 0);
  rank[0] = 1;
  parallel_for(static_cast<std::size_t>(dim),
               [&](std::size_t i) { rank[i + 1] = rank_mod_p(chains.d[i + 1], p); });
  std::vector<std::size_t> betti(static_cast<std::size_t>(dim) + 1);
  for (int k = 0; k <= dim; ++k) betti[k] = chains.counts[k] - rank[k] - rank[k + 1];
  return betti;
}

std::string format_report(const HomologyResult& result) {
  std::ostringstream os;
  if (result.empty_complex) os << "H~-1 rank=1\n";
  for (std::size_t k = 0; k < result.groups.size(); ++k) {
    os << "H~" << k << " rank=" << result.groups[k].rank;
    if (!result.groups[k].torsion.empty()) {
      os << " torsion=";
      for (std::size_t i = 0; i < result.groups[k].torsion.size(); ++i) {
        os << (i ? "," : "") << result.groups[k].torsion[i];
      }
    }
    os << '\n';
  }
  return os.str();
}

HomologyResult parse_report(const std::string& text) {
  HomologyResult result;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string degree;
    std::string rank;
    std::string torsion;
    ls >> degree >> rank >> torsion;
    if (degree.rfind("H~", 0) != 0 || rank.rfind("rank=", 0) != 0) {
      throw InputError("malformed homology report line: " + line);
    }
    if (degree == "H~-1") {
      result.empty_complex = true;
      continue;
    }
    const auto k = std::stoul(degree.substr(2));
    if (k != result.groups.size()) throw InputError("homology report degrees out of order");
    HomologyGroup g;
    g.rank = std::stoul(rank.substr(5));
    if (!torsion.empty()) {
      if (torsion.rfind("torsion=", 0) != 0) throw InputError("malformed torsion field: " + line);
      std::istringstream ts(torsion.substr(8));
      std::string factor;
      while (std::getline(ts, factor, ',')) g.torsion.emplace_back(factor);
    }
    result.groups.push_back(std::move(g));
  }
  return result;
}

std::vector<IntegerMatrix> chain_map_from_vertex_map(const SimplicialComplex& domain,
                                                     const SimplicialComplex& codomain,
                                                     const VertexMap& f) {
  const FaceIndex src(domain);
  const FaceIndex dst(codomain);
  std::vector<IntegerMatrix> maps;
  std::vector<Vertex> image;
  for (int k = 0; k <= src.dimension(); ++k) {
    IntegerMatrix m(dst.count(k), src.count(k));
    for (std::size_t j = 0; j < src.count(k); ++j) {
      auto face = src.face(k, j);
      image.clear();
      for (Vertex v : face) image.push_back(f(v));
      std::vector<Vertex> sorted_image = image;
      std::sort(sorted_image.begin(), sorted_image.end());
      sorted_image.erase(std::unique(sorted_image.begin(), sorted_image.end()), sorted_image.end());
      if (!dst.index_of(sorted_image)) {
        throw InputError("vertex map is not simplicial: image of " +
                         ElementSet(std::vector<Element>(face.begin(), face.end())).to_string() +
                         " is not a face");
      }
      if (sorted_image.size() != image.size()) continue;
      // Parity of the permutation sorting the image.
      bool odd = false;
      for (std::size_t a = 0; a < image.size(); ++a) {
        for (std::size_t b = a + 1; b < image.size(); ++b) {
          if (image[a] > image[b]) odd = !odd;
        }
      }
      m.set_column(j, {{static_cast<std::uint32_t>(*dst.index_of(sorted_image)), Integer(odd ? -1 : 1)}});
    }
    maps.push_back(std::move(m));
  }
  for (int k = 1; k <= src.dimension(); ++k) {
    const IntegerMatrix lhs = k <= dst.dimension() ? boundary_matrix(dst, k) * maps[k]
                                                   : IntegerMatrix(dst.count(k - 1), src.count(k));
    const IntegerMatrix rhs = maps[k - 1] * boundary_matrix(src, k);
    if (!(lhs == rhs)) throw std::logic_error("chain map does not commute with boundaries");
  }
  return maps;
}

namespace {

using ModVec = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

// Column reduction over GF(p). Pivots are the largest row index below
// `limit`; rows at or above `limit` are carried along untouched, which lets a
// caller track the combination producing each reduced column.
class ModPReducer {
 public:
  ModPReducer(std::uint64_t p, std::uint32_t limit, std::size_t& budget)
      : p_(p), limit_(limit), budget_(budget) {}

  // Reduces `v` in place; stores it and returns true when it is independent.
  bool insert(ModVec& v) {
    while (true) {
      const auto low = lowest(v);
      if (!low) return false;
      auto it = pivots_.find(low->first);
      if (it == pivots_.end()) {
        charge(v.size());
        pivots_.emplace(low->first, stored_.size());
        stored_.push_back(v);
        return true;
      }
      const ModVec& w = stored_[it->second];
      const std::uint64_t wl = lowest(w)->second;
      const std::uint64_t k = mul_mod(low->second, inv_mod(wl, p_), p_);
      v = axpy(v, k, w);
    }
  }

  std::optional<std::pair<std::uint32_t, std::uint64_t>> lowest(const ModVec& v) const {
    auto it = std::lower_bound(v.begin(), v.end(), limit_,
                               [](const auto& e, std::uint32_t r) { return e.first < r; });
    if (it == v.begin()) return std::nullopt;
    return *std::prev(it);
  }

  std::size_t rank() const { return stored_.size(); }

 private:
  ModVec axpy(const ModVec& a, std::uint64_t k, const ModVec& b) const {
    ModVec out;
    out.reserve(a.size() + b.size());
    std::size_t x = 0;
    std::size_t y = 0;
    while (x < a.size() || y < b.size()) {
      if (y == b.size() || (x < a.size() && a[x].first < b[y].first)) {
        out.push_back(a[x++]);
      } else {
        const std::uint64_t kb = mul_mod(k, b[y].second, p_);
        std::uint64_t v;
        std::uint32_t row = b[y].first;
        if (x < a.size() && a[x].first == b[y].first) {
          v = a[x].second >= kb ? a[x].second - kb : a[x].second + (p_ - kb);
          ++x;
        } else {
          v = kb == 0 ? 0 : p_ - kb;
        }
        ++y;
        if (v != 0) out.emplace_back(row, v);
      }
    }
    return out;
  }

  void charge(std::size_t entries) {
    if (entries > budget_) {
      throw ResourceError("induced homology computation exceeds its memory budget; "
                          "compare Betti numbers instead");
    }
    budget_ -= entries;
  }

  std::uint64_t p_;
  std::uint32_t limit_;
  std::size_t& budget_;
  std::unordered_map<std::uint32_t, std::size_t> pivots_;
  std::vector<ModVec> stored_;
};

ModVec to_mod(const IntegerMatrix::Column& col, std::uint64_t p) {
  ModVec out;
  for (const auto& e : col) {
    Integer r = e.value % p;
    if (r < 0) r += p;
    if (r != 0) out.emplace_back(e.row, static_cast<std::uint64_t>(r));
  }
  return out;
}

// ∂_k with ∂_0 the augmentation; empty matrix beyond the dimension.
IntegerMatrix boundary_or_empty(const FaceIndex& faces, int k) {
  if (k == 0) return augmentation_matrix(faces);
  if (k > faces.dimension()) return IntegerMatrix(faces.count(k - 1), faces.count(k));
  return boundary_matrix(faces, k);
}

std::vector<DegreeIso> iso_data(const FaceIndex& src, const FaceIndex& dst,
                                const std::vector<IntegerMatrix>& fmap, std::uint64_t p,
                                std::size_t budget) {
  const int top = std::max(src.dimension(), dst.dimension());
  std::vector<DegreeIso> out;
  for (int k = 0; k <= top; ++k) {
    DegreeIso deg;
    // Cycles of the domain, tracked through identity rows.
    const IntegerMatrix d_src = boundary_or_empty(src, k);
    const auto rows = static_cast<std::uint32_t>(d_src.rows());
    ModPReducer cycles(p, rows, budget);
    std::vector<ModVec> kernel;
    for (std::size_t j = 0; j < d_src.cols(); ++j) {
      ModVec v = to_mod(d_src.column(j), p);
      v.emplace_back(rows + static_cast<std::uint32_t>(j), 1);
      if (!cycles.insert(v)) {
        ModVec z;
        for (const auto& [r, x] : v) z.emplace_back(r - rows, x);
        kernel.push_back(std::move(z));
      }
    }
    const IntegerMatrix d_src_up = boundary_or_empty(src, k + 1);
    const std::size_t rank_src_up = d_src_up.cols() == 0 ? 0 : rank_mod_p(d_src_up, p);
    deg.dim_domain = kernel.size() - rank_src_up;

    const IntegerMatrix d_dst = boundary_or_empty(dst, k);
    const std::size_t rank_dst = d_dst.cols() == 0 ? 0 : rank_mod_p(d_dst, p);
    const IntegerMatrix d_dst_up = boundary_or_empty(dst, k + 1);
    ModPReducer image(p, static_cast<std::uint32_t>(dst.count(k)), budget);
    for (std::size_t j = 0; j < d_dst_up.cols(); ++j) {
      ModVec v = to_mod(d_dst_up.column(j), p);
      image.insert(v);
    }
    deg.dim_codomain = dst.count(k) - rank_dst - image.rank();
    const std::size_t before = image.rank();
    if (k < static_cast<int>(fmap.size())) {
      const IntegerMatrix& fk = fmap[k];
      for (const auto& z : kernel) {
        std::unordered_map<std::uint32_t, std::uint64_t> acc;
        for (const auto& [j, x] : z) {
          for (const auto& [r, y] : to_mod(fk.column(j), p)) {
            acc[r] = (acc[r] + mul_mod(x, y, p)) % p;
          }
        }
        ModVec v;
        for (const auto& [r, x] : acc) {
          if (x != 0) v.emplace_back(r, x);
        }
        std::sort(v.begin(), v.end());
        image.insert(v);
      }
    }
    deg.rank_map = image.rank() - before;
    deg.iso = deg.dim_domain == deg.dim_codomain && deg.rank_map == deg.dim_domain;
    out.push_back(deg);
  }
  return out;
}

}  // namespace

IsoVerdict homology_map_is_iso(const SimplicialComplex& domain, const SimplicialComplex& codomain,
                               const VertexMap& f, std::size_t entry_budget) {
  const auto fmap = chain_map_from_vertex_map(domain, codomain, f);
  const FaceIndex src(domain);
  const FaceIndex dst(codomain);
  if (src.total() + dst.total() > entry_budget) {
    throw ResourceError("induced homology computation exceeds its memory budget; "
                        "compare Betti numbers instead");
  }
  const auto first = iso_data(src, dst, fmap, random_prime_62(1), entry_budget);
  const auto second = iso_data(src, dst, fmap, random_prime_62(2), entry_budget);
  for (std::size_t k = 0; k < first.size(); ++k) {
    if (first[k].dim_domain != second[k].dim_domain ||
        first[k].dim_codomain != second[k].dim_codomain ||
        first[k].rank_map != second[k].rank_map) {
      throw std::runtime_error("rank data disagree between the two certification primes");
    }
  }
  IsoVerdict verdict;
  verdict.degrees = first;
  verdict.iso = std::all_of(first.begin(), first.end(), [](const DegreeIso& d) { return d.iso; });
  return verdict;
}

}  // namespace cbpd
