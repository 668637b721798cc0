#include <fstream>
#include <numeric>
#include <sstream>

#include "doctest.h"

#include "cbpd/complex.hpp"
#include "cbpd/errors.hpp"
#include "cbpd/homology.hpp"
#include "cbpd/integer_matrix.hpp"
#include "cbpd/random.hpp"

using namespace cbpd;

namespace {

SimplicialComplex hollow_triangle() { return SimplicialComplex(3, {{0, 1}, {1, 2}, {0, 2}}); }

SimplicialComplex rp2() {
  std::ifstream in(std::string(CBPD_FIXTURES) + "/rp2.fct");
  std::vector<ElementSet> facets;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<Element> f;
    Element v;
    while (ls >> v) f.push_back(v);
    facets.emplace_back(std::move(f));
  }
  return SimplicialComplex(6, facets);
}

// Rank over the rationals by fraction-free Gaussian elimination on a dense copy.
std::size_t dense_rank(const IntegerMatrix& m) {
  std::vector<std::vector<Integer>> a(m.rows(), std::vector<Integer>(m.cols()));
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (const auto& e : m.column(j)) a[e.row][j] = e.value;
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < m.rows() && a[piv][c] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      if (a[i][c] == 0) continue;
      const Integer x = a[i][c];
      const Integer y = a[rank][c];
      for (std::size_t j = c; j < m.cols(); ++j) a[i][j] = a[i][j] * y - a[rank][j] * x;
    }
    ++rank;
  }
  return rank;
}

IntegerMatrix random_sparse(Rng& rng, std::size_t rows, std::size_t cols) {
  IntegerMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (rng.below(5) == 0) m.set(i, j, Integer(static_cast<long long>(rng.below(13)) - 6));
    }
  }
  return m;
}

std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

}  // namespace

TEST_CASE("faces by dimension") {
  FaceIndex tri(hollow_triangle());
  CHECK(tri.f_vector() == std::vector<std::size_t>{3, 3});
  FaceIndex full(SimplicialComplex(3, {{0, 1, 2}}));
  CHECK(full.f_vector() == std::vector<std::size_t>{3, 3, 1});
  CHECK(full.index_of(std::vector<Vertex>{0, 2}) == std::size_t{1});
  CHECK_FALSE(tri.index_of(std::vector<Vertex>{0, 1, 2}));
}

TEST_CASE("boundary matrices") {
  const IntegerMatrix edge = boundary_matrix(SimplicialComplex(2, {{0, 1}}), 1);
  CHECK(edge == IntegerMatrix::from_dense({{-1}, {1}}));
  const IntegerMatrix d1 = boundary_matrix(hollow_triangle(), 1);
  for (std::size_t j = 0; j < d1.cols(); ++j) {
    Integer sum = 0;
    for (const auto& e : d1.column(j)) sum += e.value;
    CHECK(sum == 0);
  }
  const IntegerMatrix d2 = boundary_matrix(SimplicialComplex(3, {{0, 1, 2}}), 2);
  CHECK(d2 == IntegerMatrix::from_dense({{1}, {-1}, {1}}));
  CHECK_THROWS_AS(boundary_matrix(hollow_triangle(), 2), InputError);
  CHECK_THROWS_AS(boundary_matrix(hollow_triangle(), 0), InputError);
}

TEST_CASE("smith normal form examples") {
  auto diag = smith_normal_form(IntegerMatrix::from_dense({{2, 0}, {0, 3}}));
  CHECK(diag.rank == 2);
  CHECK(diag.invariant_factors == std::vector<Integer>{1, 6});
  auto zero = smith_normal_form(IntegerMatrix(3, 4));
  CHECK(zero.rank == 0);
  CHECK(zero.invariant_factors.empty());
  auto tri = smith_normal_form(boundary_matrix(hollow_triangle(), 1));
  CHECK(tri.rank == 2);
  CHECK(tri.invariant_factors == std::vector<Integer>{1, 1});
  auto mixed = smith_normal_form(IntegerMatrix::from_dense({{4, 6}, {6, 4}}));
  CHECK(mixed.invariant_factors == std::vector<Integer>{2, 10});
}

TEST_CASE("smith normal form falls back to big integers") {
  // Repeated squaring in a triangular chain forces entries beyond 64 bits.
  const std::size_t n = 8;
  IntegerMatrix m(n, n);
  Integer big = 3;
  for (std::size_t i = 0; i < n; ++i) {
    m.set(i, i, big);
    if (i + 1 < n) m.set(i, i + 1, Integer(1) + big);
    big = big * big;
  }
  auto snf = smith_normal_form(m);
  CHECK(snf.rank == n);
  Integer product = 1;
  for (const auto& d : snf.invariant_factors) product *= d;
  Integer det = 1;
  for (std::size_t i = 0; i < n; ++i) det *= m.at(i, i);
  CHECK(product == det);
}

TEST_CASE("smith normal form is invariant under permutations") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const IntegerMatrix m = random_sparse(rng, 20, 20);
    const auto base = smith_normal_form(m);
    const auto pr = random_permutation(rng, 20);
    const auto pc = random_permutation(rng, 20);
    const auto moved = smith_normal_form(m.permuted(pr, pc));
    REQUIRE(base.invariant_factors == moved.invariant_factors);
    REQUIRE(base.rank == dense_rank(m));
  }
}

TEST_CASE("divisibility of invariant factors") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto snf = smith_normal_form(random_sparse(rng, 8, 10));
    for (std::size_t i = 1; i < snf.invariant_factors.size(); ++i) {
      REQUIRE(snf.invariant_factors[i] % snf.invariant_factors[i - 1] == 0);
    }
  }
}

TEST_CASE("rank modulo a prime") {
  const auto m = IntegerMatrix::from_dense({{2, 0}, {0, 3}});
  CHECK(rank_mod_p(m, 2) == 1);
  CHECK(rank_mod_p(m, 3) == 1);
  CHECK(rank_mod_p(m, 5) == 2);
  CHECK_THROWS_AS(rank_mod_p(m, 4), InputError);
}

TEST_CASE("reduced homology examples") {
  const auto circle = integral_homology(hollow_triangle());
  CHECK(circle.betti() == std::vector<std::size_t>{0, 1});
  CHECK(circle.torsion_free());

  const auto proj = integral_homology(rp2());
  CHECK(proj.betti() == std::vector<std::size_t>{0, 0, 0});
  CHECK(proj[1].torsion == std::vector<Integer>{2});
  CHECK(proj[2].torsion.empty());

  const auto point = integral_homology(SimplicialComplex(1, {{0}}));
  CHECK(point.betti() == std::vector<std::size_t>{0});

  const auto two_points = integral_homology(SimplicialComplex(2, {{0}, {1}}));
  CHECK(two_points.betti() == std::vector<std::size_t>{1});

  const auto empty = integral_homology(SimplicialComplex(0, {}));
  CHECK(empty.empty_complex);
  CHECK(empty.groups.empty());
}

TEST_CASE("mod p Betti numbers") {
  CHECK(betti_mod_p(hollow_triangle(), 2) == std::vector<std::size_t>{0, 1});
  CHECK(betti_mod_p(rp2(), 2) == std::vector<std::size_t>{0, 1, 1});
  CHECK(betti_mod_p(rp2(), 3) == std::vector<std::size_t>{0, 0, 0});
  CHECK_THROWS_AS(betti_mod_p(rp2(), 9), InputError);
}

TEST_CASE("Euler characteristic matches homology") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ElementSet> facets;
    const std::size_t nv = 7;
    for (int i = 0; i < 6; ++i) {
      std::vector<Element> f;
      for (Element v = 0; v < nv; ++v) {
        if (rng.below(2)) f.push_back(v);
      }
      if (!f.empty()) facets.emplace_back(std::move(f));
    }
    const SimplicialComplex k(nv, facets);
    if (k.empty()) continue;
    const FaceIndex faces(k);
    const auto h = integral_homology(k);
    long long chi_faces = 0;
    long long chi_homology = 0;
    for (int d = 0; d <= faces.dimension(); ++d) {
      const long long sign = d % 2 == 0 ? 1 : -1;
      chi_faces += sign * static_cast<long long>(faces.count(d));
      chi_homology += sign * static_cast<long long>(h[d].rank + (d == 0 ? 1 : 0));
    }
    REQUIRE(chi_faces == chi_homology);
    if (h.torsion_free()) REQUIRE(betti_mod_p(k, 1'000'000'007) == h.betti());
  }
}

TEST_CASE("homology agrees with SNF of the full boundary matrices") {
  Rng rng(4);
  std::size_t with_torsion = 0;
  std::vector<SimplicialComplex> cases{rp2(), barycentric_subdivision(rp2())};
  for (int trial = 0; trial < 80; ++trial) {
    std::vector<ElementSet> facets;
    const std::size_t nv = 5 + rng.below(5);
    const std::size_t nf = 1 + rng.below(9);
    for (std::size_t i = 0; i < nf; ++i) {
      std::vector<Element> f;
      for (Element v = 0; v < nv; ++v) {
        if (rng.below(3) == 0) f.push_back(v);
      }
      if (!f.empty()) facets.emplace_back(std::move(f));
    }
    if (!facets.empty()) cases.emplace_back(nv, facets);
  }
  for (const auto& k : cases) {
    const FaceIndex faces(k);
    const int dim = faces.dimension();
    std::vector<SmithResult> snf(static_cast<std::size_t>(dim) + 2);
    snf[0].rank = 1;
    for (int d = 1; d <= dim; ++d) snf[d] = smith_normal_form(boundary_matrix(faces, d));
    const auto h = integral_homology(k);
    REQUIRE(h.groups.size() == static_cast<std::size_t>(dim) + 1);
    for (int d = 0; d <= dim; ++d) {
      CHECK(h[d].rank == faces.count(d) - snf[d].rank - snf[d + 1].rank);
      CHECK(h[d].torsion == snf[d + 1].torsion());
      with_torsion += !snf[d + 1].torsion().empty();
    }
  }
  CHECK(with_torsion >= 2);
}

TEST_CASE("barycentric subdivision preserves homology") {
  CHECK(integral_homology(barycentric_subdivision(rp2())) == integral_homology(rp2()));
  CHECK(integral_homology(barycentric_subdivision(hollow_triangle())) ==
        integral_homology(hollow_triangle()));
  const SimplicialComplex two_simplices(5, {{0, 1, 2}, {2, 3, 4}});
  CHECK(barycentric_subdivision(two_simplices).facets().size() == 12);
}

TEST_CASE("report format round trip") {
  const auto proj = integral_homology(rp2());
  const std::string text = format_report(proj);
  CHECK(text == "H~0 rank=0\nH~1 rank=0 torsion=2\nH~2 rank=0\n");
  CHECK(parse_report(text) == proj);
}

TEST_CASE("chain maps and induced isomorphisms") {
  const auto tri = hollow_triangle();
  const auto identity = homology_map_is_iso(tri, tri, [](Vertex v) { return v; });
  CHECK(identity.iso);

  const SimplicialComplex point(1, {{0}});
  const auto constant = homology_map_is_iso(tri, point, [](Vertex) { return Vertex{0}; });
  CHECK_FALSE(constant.iso);
  CHECK(constant.degrees[0].iso);
  CHECK_FALSE(constant.degrees[1].iso);

  // Subdivision folded back onto the original vertices: a homotopy equivalence.
  const auto sd = barycentric_subdivision(tri);
  const FaceIndex faces(tri);
  const auto fold = [&](Vertex v) -> Vertex {
    if (v < faces.count(0)) return faces.face(0, v)[0];
    return faces.face(1, v - faces.count(0))[0];
  };
  CHECK(homology_map_is_iso(sd, tri, fold).iso);

  // A reflection of the circle reverses orientation: chain map entries flip.
  const auto maps = chain_map_from_vertex_map(tri, tri, [](Vertex v) { return Vertex{2 - v}; });
  CHECK(maps[1].at(1, 1) == -1);

  const SimplicialComplex two_points(2, {{0}, {1}});
  CHECK_THROWS_AS(chain_map_from_vertex_map(SimplicialComplex(2, {{0, 1}}), two_points,
                                            [](Vertex v) { return v; }),
                  InputError);
}
