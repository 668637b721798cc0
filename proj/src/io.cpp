#include "cbpd/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cbpd/errors.hpp"

namespace cbpd {

namespace {

struct LineReader {
  std::istringstream in;
  std::size_t lineno = 0;
  std::string line;

  explicit LineReader(const std::string& text) : in(text) {}

  // Next non-blank, non-comment line.
  bool next() {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw InputError("line " + std::to_string(lineno) + ": " + why);
  }
};

std::size_t parse_index(const LineReader& r, const std::string& tok) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (tok.empty() || tok[0] == '-' || tok[0] == '+') throw std::invalid_argument(tok);
    v = std::stoull(tok, &used);
  } catch (const std::exception&) {
    r.fail("expected a non-negative integer, got '" + tok + "'");
  }
  if (used != tok.size()) r.fail("expected a non-negative integer, got '" + tok + "'");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ls(line);
  std::vector<std::string> out;
  std::string tok;
  while (ls >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string write_poset(const FinitePoset& poset) {
  std::ostringstream os;
  os << "POSET " << poset.size() << '\n';
  if (poset.has_labels()) {
    for (Element x = 0; x < poset.size(); ++x) os << "LABEL " << x << ' ' << poset.label(x) << '\n';
  }
  for (const auto& [a, b] : poset.cover_pairs()) os << "COVER " << a << ' ' << b << '\n';
  return os.str();
}

FinitePoset parse_poset(const std::string& text) {
  LineReader r(text);
  if (!r.next()) throw InputError("poset file is empty");
  auto head = tokens(r.line);
  if (head.size() != 2 || head[0] != "POSET") r.fail("expected 'POSET <n>'");
  const std::size_t n = parse_index(r, head[1]);
  std::vector<std::string> labels;
  std::vector<bool> labelled(n, false);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::pair<std::size_t, std::size_t>> covers;
  while (r.next()) {
    auto t = tokens(r.line);
    if (t[0] == "LABEL") {
      if (t.size() != 3) r.fail("expected 'LABEL <i> <token>'");
      const std::size_t i = parse_index(r, t[1]);
      if (i >= n) r.fail("label index " + t[1] + " out of range");
      if (labelled[i]) r.fail("duplicate LABEL for " + t[1]);
      if (labels.empty()) {
        labels.resize(n);
        for (std::size_t x = 0; x < n; ++x) labels[x] = std::to_string(x);
      }
      labels[i] = t[2];
      labelled[i] = true;
    } else if (t[0] == "COVER") {
      if (t.size() != 3) r.fail("expected 'COVER <i> <j>'");
      const std::size_t a = parse_index(r, t[1]);
      const std::size_t b = parse_index(r, t[2]);
      if (a >= n || b >= n) r.fail("cover index out of range");
      if (!seen.emplace(a, b).second) r.fail("duplicate COVER " + t[1] + " " + t[2]);
      covers.emplace_back(a, b);
    } else if (t[0] == "POSET") {
      r.fail("second POSET header");
    } else {
      r.fail("unknown keyword '" + t[0] + "'");
    }
  }
  return FinitePoset::from_covers(n, covers, std::move(labels));
}

std::string write_frames(const std::vector<ElementSet>& frames) {
  std::ostringstream os;
  for (const auto& f : frames) {
    os << "FRAME";
    for (Element x : f) os << ' ' << x;
    os << '\n';
  }
  return os.str();
}

std::vector<ElementSet> parse_frames(const std::string& text, std::size_t poset_size) {
  LineReader r(text);
  std::vector<ElementSet> frames;
  while (r.next()) {
    auto t = tokens(r.line);
    if (t[0] != "FRAME") r.fail("expected 'FRAME <i1> ... <ik>'");
    if (t.size() < 2) r.fail("empty frame");
    std::vector<Element> members;
    for (std::size_t i = 1; i < t.size(); ++i) {
      const std::size_t x = parse_index(r, t[i]);
      if (x >= poset_size) r.fail("frame index " + t[i] + " out of range");
      if (!members.empty() && x <= members.back()) r.fail("frame indices must be strictly ascending");
      members.push_back(static_cast<Element>(x));
    }
    frames.push_back(ElementSet::from_sorted(std::move(members)));
  }
  if (frames.empty()) throw InputError("frame file lists no frame");
  return frames;
}

std::string write_facets(const SimplicialComplex& complex) {
  std::ostringstream os;
  for (const auto& f : complex.facets()) {
    for (std::size_t i = 0; i < f.size(); ++i) os << (i ? " " : "") << f[i];
    os << '\n';
  }
  return os.str();
}

SimplicialComplex parse_facets(const std::string& text) {
  LineReader r(text);
  std::vector<ElementSet> facets;
  std::size_t vertices = 0;
  while (r.next()) {
    std::vector<Element> f;
    std::size_t pos = 0;
    const std::string& line = r.line;
    while (pos < line.size()) {
      const auto end = line.find(' ', pos);
      const std::string tok = line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
      if (tok.empty()) r.fail("vertices must be separated by single spaces");
      const std::size_t v = parse_index(r, tok);
      if (v >= (std::size_t{1} << 31)) r.fail("vertex index too large");
      if (!f.empty() && v <= f.back()) r.fail("vertex indices must be strictly ascending");
      f.push_back(static_cast<Element>(v));
      vertices = std::max(vertices, v + 1);
      if (end == std::string::npos) break;
      pos = end + 1;
      if (pos == line.size()) r.fail("trailing space");
    }
    facets.push_back(ElementSet::from_sorted(std::move(f)));
  }
  return SimplicialComplex(vertices, std::move(facets));
}

std::string write_decomposition_poset(const DecompositionPoset& poset) {
  std::ostringstream os;
  os << "POSET " << poset.size() << '\n';
  for (std::size_t i = 0; i < poset.size(); ++i) {
    os << "LABEL " << i << ' ' << poset.member(i).to_string() << '\n';
  }
  for (const auto& [a, b] : poset.order().cover_pairs()) os << "COVER " << a << ' ' << b << '\n';
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << contents;
  if (!out) throw InputError("failed writing " + path);
}

}  // namespace cbpd
