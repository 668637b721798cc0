#include "cbpd/providers.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cbpd/errors.hpp"
#include "cbpd/modular.hpp"
#include "cbpd/random.hpp"

namespace cbpd {

Integer general_linear_order(std::uint32_t q, std::size_t n) {
  Integer order = 1;
  const Integer qn = boost::multiprecision::pow(Integer(q), static_cast<unsigned>(n));
  Integer qi = 1;
  for (std::size_t i = 0; i < n; ++i) {
    order *= qn - qi;
    qi *= q;
  }
  return order;
}

Integer symplectic_group_order(std::uint32_t q, std::size_t n) {
  Integer order = boost::multiprecision::pow(Integer(q), static_cast<unsigned>(n * n));
  for (std::size_t i = 1; i <= n; ++i) {
    order *= boost::multiprecision::pow(Integer(q), static_cast<unsigned>(2 * i)) - 1;
  }
  return order;
}

Integer expected_top_rank(std::uint32_t q, std::size_t n) {
  if (!is_prime(q)) throw InputError("field order " + std::to_string(q) + " is not prime");
  if (n < 2) throw InputError("dimension must be at least 2");
  const Integer gl = general_linear_order(q, n);
  const Integer torus = Integer(n) * (boost::multiprecision::pow(Integer(q), static_cast<unsigned>(n)) - 1);
  if (gl % torus != 0) throw std::logic_error("group order not divisible by torus normalizer order");
  return gl / torus;
}

std::vector<DimensionCheck> closed_form_checks(const Instance& instance, const DimensionReport& report) {
  std::vector<DimensionCheck> out;
  if (!instance.cross_polytope_rank) return out;
  const std::size_t n = *instance.cross_polytope_rank;
  long three_n = 1;
  for (std::size_t i = 0; i < n; ++i) three_n *= 3;
  auto status = [](bool ok) { return ok ? CheckStatus::pass : CheckStatus::fail; };
  out.push_back({"dim CB = 3^n - 2", status(report.dim_cb == three_n - 2)});
  out.push_back({"dim PD = 4n - 3", status(report.dim_pd == 4 * static_cast<long>(n) - 3)});
  return out;
}

namespace {

Integer factorial(std::size_t n) {
  Integer f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

std::shared_ptr<const FinitePoset> containment_poset(const std::vector<Subspace>& subspaces,
                                                     std::vector<std::string> labels) {
  return std::make_shared<const FinitePoset>(FinitePoset::from_relation(
      subspaces.size(),
      [&](std::size_t a, std::size_t b) { return subspaces[a].vectors.is_subset_of(subspaces[b].vectors); },
      std::move(labels), false));
}

}  // namespace

SubspaceInstance subspace_provider(std::uint32_t q, std::size_t n, std::size_t budget) {
  if (n < 2) throw InputError("subspace provider needs n >= 2");
  const PrimeVectorSpace space(q, n);
  SubspaceInstance inst;
  inst.q = q;
  inst.n = n;
  inst.name = "subspace(" + std::to_string(q) + "," + std::to_string(n) + ")";
  inst.expected_top_rank = expected_top_rank(q, n);
  inst.subspaces = enumerate_subspaces(space, 1, n - 1, budget);
  std::vector<std::string> labels;
  for (const auto& s : inst.subspaces) labels.push_back(subspace_label(space, s));
  inst.poset = containment_poset(inst.subspaces, std::move(labels));

  std::vector<Element> lines;
  for (std::size_t i = 0; i < inst.subspaces.size(); ++i) {
    if (inst.subspaces[i].dim == 1) lines.push_back(static_cast<Element>(i));
  }
  // Depth-first over lines in index order, pruning lines inside the current span.
  std::vector<ElementSet> frames;
  std::vector<Element> chosen;
  std::vector<std::uint32_t> reps;
  std::function<void(std::size_t)> extend = [&](std::size_t from) {
    if (chosen.size() == n) {
      frames.emplace_back(chosen);
      return;
    }
    const Bitset span = space.span(reps);
    for (std::size_t i = from; i + (n - chosen.size()) <= lines.size(); ++i) {
      const std::uint32_t v = inst.subspaces[lines[i]].basis[0];
      if (span.test(v)) continue;
      chosen.push_back(lines[i]);
      reps.push_back(v);
      extend(i + 1);
      chosen.pop_back();
      reps.pop_back();
    }
  };
  extend(0);
  const Integer expected = general_linear_order(q, n) /
                           (boost::multiprecision::pow(Integer(q - 1), static_cast<unsigned>(n)) * factorial(n));
  if (Integer(frames.size()) != expected) {
    throw std::logic_error("frame count " + std::to_string(frames.size()) + " differs from " +
                           expected.str());
  }
  inst.family = std::make_shared<const FrameFamily>(inst.poset, std::move(frames));
  return inst;
}

MatroidSpec MatroidSpec::uniform(std::size_t n, std::size_t k) {
  MatroidSpec s;
  s.kind = Kind::uniform;
  s.n = n;
  s.k = k;
  return s;
}

MatroidSpec MatroidSpec::free(std::size_t n) {
  MatroidSpec s;
  s.kind = Kind::free;
  s.n = n;
  s.k = n;
  return s;
}

MatroidSpec MatroidSpec::from_bases(std::size_t ground, std::vector<ElementSet> bases) {
  MatroidSpec s;
  s.kind = Kind::bases;
  s.n = ground;
  s.bases = std::move(bases);
  return s;
}

MatroidSpec parse_bases(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> ground;
  std::vector<ElementSet> bases;
  std::size_t max_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw InputError("bases line " + std::to_string(lineno) + ": " + why);
    };
    if (key == "GROUND") {
      long long g;
      if (!(ls >> g) || g < 0) fail("GROUND needs a non-negative size");
      if (ground) fail("duplicate GROUND line");
      ground = static_cast<std::size_t>(g);
    } else if (key == "BASIS") {
      std::vector<Element> members;
      std::string tok;
      while (ls >> tok) {
        try {
          std::size_t used = 0;
          const long long v = std::stoll(tok, &used);
          if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
          members.push_back(static_cast<Element>(v));
          max_index = std::max<std::size_t>(max_index, static_cast<std::size_t>(v));
        } catch (const std::exception&) {
          fail("bad element index '" + tok + "'");
        }
      }
      const std::size_t count = members.size();
      ElementSet b(std::move(members));
      if (b.size() != count) fail("repeated element in basis");
      bases.push_back(std::move(b));
    } else {
      fail("unknown keyword '" + key + "'");
    }
  }
  if (bases.empty()) throw InputError("bases file lists no basis");
  const std::size_t g = ground.value_or(max_index + 1);
  if (max_index >= g) throw InputError("basis element exceeds the ground set");
  return MatroidSpec::from_bases(g, std::move(bases));
}

std::size_t MatroidInstance::rank_of(std::uint32_t mask) const {
  std::size_t r = 0;
  for (std::uint32_t b : bases) r = std::max<std::size_t>(r, std::popcount(mask & b));
  return r;
}

std::optional<Element> MatroidInstance::element_of(const ElementSet& subset) const {
  std::uint32_t mask = 0;
  for (Element x : subset) {
    if (x >= ground) return std::nullopt;
    mask |= 1U << x;
  }
  for (std::size_t i = 0; i < flats.size(); ++i) {
    if (flats[i] == mask) return static_cast<Element>(i);
  }
  return std::nullopt;
}

namespace {

constexpr std::size_t kMaxGround = 24;

ElementSet mask_set(std::uint32_t mask) {
  std::vector<Element> out;
  for (Element i = 0; mask >> i; ++i) {
    if (mask >> i & 1U) out.push_back(i);
  }
  return ElementSet::from_sorted(std::move(out));
}

std::vector<std::uint32_t> basis_masks(const MatroidSpec& spec) {
  std::vector<std::uint32_t> out;
  switch (spec.kind) {
    case MatroidSpec::Kind::free:
      out.push_back(spec.n == 32 ? ~0U : (1U << spec.n) - 1);
      break;
    case MatroidSpec::Kind::uniform:
      for (std::uint32_t m = 0; m < (1U << spec.n); ++m) {
        if (static_cast<std::size_t>(std::popcount(m)) == spec.k) out.push_back(m);
      }
      break;
    case MatroidSpec::Kind::bases:
      for (const auto& b : spec.bases) {
        std::uint32_t m = 0;
        for (Element x : b) {
          if (x >= spec.n) throw InputError("basis " + b.to_string() + " leaves the ground set");
          m |= 1U << x;
        }
        out.push_back(m);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      break;
  }
  return out;
}

void check_exchange(const std::vector<std::uint32_t>& bases, std::size_t ground) {
  const std::size_t size = std::popcount(bases.front());
  for (std::uint32_t b : bases) {
    if (static_cast<std::size_t>(std::popcount(b)) != size) {
      throw InvalidMatroidError("bases " + mask_set(bases.front()).to_string() + " and " +
                                mask_set(b).to_string() + " differ in size");
    }
  }
  auto check_pair = [&](std::uint32_t b1, std::uint32_t b2) {
    for (std::uint32_t rest = b1 & ~b2; rest; rest &= rest - 1) {
      const std::uint32_t x = rest & (~rest + 1);
      bool found = false;
      for (std::uint32_t cand = b2 & ~b1; cand && !found; cand &= cand - 1) {
        const std::uint32_t y = cand & (~cand + 1);
        found = std::binary_search(bases.begin(), bases.end(), (b1 & ~x) | y);
      }
      if (!found) {
        throw InvalidMatroidError("basis exchange fails for " + mask_set(b1).to_string() + " and " +
                                  mask_set(b2).to_string() + " removing " +
                                  std::to_string(std::countr_zero(x)));
      }
    }
  };
  if (ground <= 12) {
    for (std::uint32_t b1 : bases) {
      for (std::uint32_t b2 : bases) check_pair(b1, b2);
    }
  } else {
    Rng rng;
    for (int i = 0; i < 10'000; ++i) check_pair(bases[rng.below(bases.size())], bases[rng.below(bases.size())]);
  }
}

}  // namespace

MatroidInstance matroid_provider(const MatroidSpec& spec, bool paranoid, std::size_t budget) {
  if (spec.n > kMaxGround) throw ResourceError("ground set larger than " + std::to_string(kMaxGround));
  if (spec.kind == MatroidSpec::Kind::uniform && (spec.k > spec.n)) {
    throw InputError("uniform matroid needs k <= n");
  }
  if (spec.kind == MatroidSpec::Kind::bases && spec.bases.empty()) {
    throw InvalidMatroidError("no bases given");
  }
  MatroidInstance inst;
  inst.ground = spec.n;
  inst.bases = basis_masks(spec);
  check_exchange(inst.bases, spec.n);
  inst.rank = std::popcount(inst.bases.front());
  if (inst.rank < 2) throw InputError("matroid rank must be at least 2");
  switch (spec.kind) {
    case MatroidSpec::Kind::free: inst.name = "free(" + std::to_string(spec.n) + ")"; break;
    case MatroidSpec::Kind::uniform:
      inst.name = "uniform(" + std::to_string(spec.n) + "," + std::to_string(spec.k) + ")";
      break;
    case MatroidSpec::Kind::bases: inst.name = "bases(" + std::to_string(spec.n) + ")"; break;
  }

  const std::uint32_t full = (1U << spec.n) - 1;
  std::vector<std::uint8_t> rank(std::size_t{1} << spec.n);
  for (std::uint32_t m = 0; m <= full; ++m) rank[m] = static_cast<std::uint8_t>(inst.rank_of(m));

  Rng rng;
  for (int i = 0; i < 1000; ++i) {
    const auto a = static_cast<std::uint32_t>(rng.below(std::uint64_t{full} + 1));
    const auto b = static_cast<std::uint32_t>(rng.below(std::uint64_t{full} + 1));
    const std::uint32_t x = spec.n ? 1U << rng.below(spec.n) : 0;
    const bool monotone = rank[a] <= rank[a | b];
    const bool submodular = rank[a | b] + rank[a & b] <= rank[a] + rank[b];
    const int step = rank[a | x] - rank[a];
    if (!monotone || !submodular || step < 0 || step > 1) {
      throw InvalidMatroidError("rank axioms fail on " + mask_set(a).to_string() + ", " +
                                mask_set(b).to_string());
    }
  }

  std::uint32_t loops = 0;
  for (std::size_t x = 0; x < spec.n; ++x) {
    if (rank[1U << x] == 0) loops |= 1U << x;
  }
  std::vector<std::uint32_t> flats;
  for (std::uint32_t m = 0; m <= full; ++m) {
    if (m == loops || m == full || (m & loops) != loops) continue;
    bool closed = true;
    for (std::uint32_t out = full & ~m; out && closed; out &= out - 1) {
      closed = rank[m | (out & (~out + 1))] > rank[m];
    }
    if (!closed) continue;
    flats.push_back(m);
    if (flats.size() > budget) throw ResourceError("flat enumeration exceeds the element budget");
  }
  std::sort(flats.begin(), flats.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (rank[a] != rank[b]) return rank[a] < rank[b];
    return mask_set(a) < mask_set(b);
  });
  inst.flats = flats;
  std::vector<std::string> labels;
  for (std::uint32_t f : flats) labels.push_back(mask_set(f).to_string());
  inst.poset = std::make_shared<const FinitePoset>(FinitePoset::from_relation(
      flats.size(), [&](std::size_t a, std::size_t b) { return (flats[a] & ~flats[b]) == 0; },
      std::move(labels), false));

  std::vector<Element> atoms;
  for (std::size_t i = 0; i < flats.size(); ++i) {
    if (rank[flats[i]] == 1) atoms.push_back(static_cast<Element>(i));
  }
  const bool check_all = paranoid && spec.n <= 8;
  std::vector<ElementSet> frames;
  std::vector<Element> chosen;
  std::size_t visited = 0;
  std::function<void(std::size_t)> extend = [&](std::size_t from) {
    if (++visited > 50'000'000) throw ResourceError("frame enumeration exceeds its budget");
    if (chosen.size() == inst.rank) {
      std::uint32_t transversal = 0;
      for (Element a : chosen) transversal |= (flats[a] & ~loops) & (~(flats[a] & ~loops) + 1);
      const bool is_basis = rank[transversal] == inst.rank;
      if (check_all) {
        // Every choice of non-loop representatives must agree.
        std::function<void(std::size_t, std::uint32_t)> each = [&](std::size_t i, std::uint32_t acc) {
          if (i == chosen.size()) {
            if ((rank[acc] == inst.rank) != is_basis) {
              throw std::logic_error("transversals of " + ElementSet(chosen).to_string() +
                                     " disagree on being a basis");
            }
            return;
          }
          for (std::uint32_t rest = flats[chosen[i]] & ~loops; rest; rest &= rest - 1) {
            each(i + 1, acc | (rest & (~rest + 1)));
          }
        };
        each(0, 0);
      }
      if (is_basis) frames.emplace_back(chosen);
      return;
    }
    for (std::size_t i = from; i + (inst.rank - chosen.size()) <= atoms.size(); ++i) {
      chosen.push_back(atoms[i]);
      extend(i + 1);
      chosen.pop_back();
    }
  };
  extend(0);
  inst.family = std::make_shared<const FrameFamily>(inst.poset, std::move(frames));
  return inst;
}

SymplecticInstance symplectic_provider(std::uint32_t q, std::size_t n, std::size_t budget) {
  if (n < 1) throw InputError("symplectic provider needs n >= 1");
  const PrimeVectorSpace space(q, 2 * n);
  auto form = [&](std::uint32_t a, std::uint32_t b) {
    const auto x = space.decode(a);
    const auto y = space.decode(b);
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s += static_cast<std::uint64_t>(x[i]) * y[n + i] + static_cast<std::uint64_t>(q - x[n + i]) * y[i];
    }
    return static_cast<std::uint32_t>(s % q);
  };
  SymplecticInstance inst;
  inst.q = q;
  inst.n = n;
  inst.name = "symplectic(" + std::to_string(q) + "," + std::to_string(n) + ")";
  inst.cross_polytope_rank = n;
  for (auto& s : enumerate_subspaces(space, 1, n, budget)) {
    bool isotropic = true;
    for (std::size_t i = 0; i < s.basis.size() && isotropic; ++i) {
      for (std::size_t j = i + 1; j < s.basis.size() && isotropic; ++j) {
        isotropic = form(s.basis[i], s.basis[j]) == 0;
      }
    }
    if (isotropic) inst.subspaces.push_back(std::move(s));
  }
  std::vector<std::string> labels;
  for (const auto& s : inst.subspaces) labels.push_back(subspace_label(space, s));
  inst.poset = containment_poset(inst.subspaces, std::move(labels));

  std::vector<Element> lines;
  for (std::size_t i = 0; i < inst.subspaces.size(); ++i) {
    if (inst.subspaces[i].dim == 1) lines.push_back(static_cast<Element>(i));
  }
  const std::size_t nl = lines.size();
  std::vector<std::vector<bool>> orth(nl, std::vector<bool>(nl));
  for (std::size_t a = 0; a < nl; ++a) {
    for (std::size_t b = 0; b < nl; ++b) {
      orth[a][b] = form(inst.subspaces[lines[a]].basis[0], inst.subspaces[lines[b]].basis[0]) == 0;
    }
  }
  // Hyperbolic pairs chosen in increasing order of their smaller line.
  std::vector<ElementSet> frames;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> extend = [&](std::size_t from) {
    if (chosen.size() == 2 * n) {
      std::vector<Element> members;
      for (std::size_t c : chosen) members.push_back(lines[c]);
      frames.emplace_back(std::move(members));
      return;
    }
    auto free_line = [&](std::size_t x) {
      return std::all_of(chosen.begin(), chosen.end(), [&](std::size_t c) { return orth[x][c]; });
    };
    for (std::size_t a = from; a < nl; ++a) {
      if (!free_line(a)) continue;
      for (std::size_t b = a + 1; b < nl; ++b) {
        if (orth[a][b] || !free_line(b)) continue;
        chosen.push_back(a);
        chosen.push_back(b);
        extend(a + 1);
        chosen.pop_back();
        chosen.pop_back();
      }
    }
  };
  extend(0);
  const Integer expected = symplectic_group_order(q, n) /
                           (boost::multiprecision::pow(Integer(q - 1), static_cast<unsigned>(n)) *
                            boost::multiprecision::pow(Integer(2), static_cast<unsigned>(n)) * factorial(n));
  if (Integer(frames.size()) != expected) {
    throw std::logic_error("symplectic frame count " + std::to_string(frames.size()) + " differs from " +
                           expected.str());
  }
  inst.family = std::make_shared<const FrameFamily>(inst.poset, std::move(frames));

  // Σ(τ) against the face poset of the cross polytope boundary: supports are
  // the non-empty subsets of τ without an opposite pair, ordered by inclusion.
  const FrameFamily& fam = *inst.family;
  std::vector<std::size_t> line_pos(inst.subspaces.size());
  for (std::size_t i = 0; i < nl; ++i) line_pos[lines[i]] = i;
  std::size_t cross = 1;
  for (std::size_t i = 0; i < n; ++i) cross *= 3;
  --cross;
  for (std::size_t t = 0; t < fam.size(); ++t) {
    const ElementSet& tau = fam.frame(t);
    const ElementSet& sigma = fam.sigma(t);
    auto fail = [&](const std::string& why) {
      throw std::logic_error("Σ of frame " + tau.to_string() + " is not a cross polytope: " + why);
    };
    if (sigma.size() != cross) fail("size " + std::to_string(sigma.size()));
    std::vector<ElementSet> supports;
    for (Element y : sigma) {
      ElementSet supp = fam.support(t, y);
      if (supp.empty()) fail("empty support");
      for (Element a : supp) {
        for (Element b : supp) {
          if (a < b && !orth[line_pos[a]][line_pos[b]]) {
            fail("support contains an opposite pair");
          }
        }
      }
      supports.push_back(std::move(supp));
    }
    auto sorted = supports;
    canonicalize(sorted);
    if (sorted.size() != supports.size()) fail("supports are not distinct");
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      for (std::size_t j = 0; j < sigma.size(); ++j) {
        if (inst.poset->leq(sigma[i], sigma[j]) != supports[j].includes(supports[i])) {
          fail("order differs from support inclusion");
        }
      }
    }
  }
  return inst;
}

}  // namespace cbpd
