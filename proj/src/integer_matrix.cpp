#include "cbpd/integer_matrix.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <tuple>

#include "cbpd/errors.hpp"
#include "cbpd/modular.hpp"

namespace cbpd {

IntegerMatrix IntegerMatrix::from_dense(std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<std::vector<long long>> v;
  for (const auto& r : rows) v.emplace_back(r);
  return from_dense(v);
}

IntegerMatrix IntegerMatrix::from_dense(const std::vector<std::vector<long long>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  IntegerMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InputError("ragged dense matrix");
    for (std::size_t j = 0; j < cols; ++j) {
      if (rows[i][j] != 0) m.columns_[j].push_back({static_cast<std::uint32_t>(i), rows[i][j]});
    }
  }
  return m;
}

void IntegerMatrix::set_column(std::size_t j, Column column) {
  std::erase_if(column, [](const Entry& e) { return e.value == 0; });
  for (std::size_t i = 0; i < column.size(); ++i) {
    if (column[i].row >= rows_ || (i > 0 && column[i - 1].row >= column[i].row)) {
      throw InputError("column entries out of range or unsorted");
    }
  }
  columns_.at(j) = std::move(column);
}

void IntegerMatrix::set(std::size_t r, std::size_t c, const Integer& value) {
  if (r >= rows_ || c >= cols()) throw InputError("matrix index out of range");
  auto& col = columns_[c];
  auto it = std::lower_bound(col.begin(), col.end(), r,
                             [](const Entry& e, std::size_t row) { return e.row < row; });
  if (it != col.end() && it->row == r) {
    if (value == 0) {
      col.erase(it);
    } else {
      it->value = value;
    }
  } else if (value != 0) {
    col.insert(it, {static_cast<std::uint32_t>(r), value});
  }
}

Integer IntegerMatrix::at(std::size_t r, std::size_t c) const {
  const auto& col = columns_.at(c);
  auto it = std::lower_bound(col.begin(), col.end(), r,
                             [](const Entry& e, std::size_t row) { return e.row < row; });
  return (it != col.end() && it->row == r) ? it->value : Integer(0);
}

std::size_t IntegerMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

bool IntegerMatrix::is_zero() const { return nonzeros() == 0; }

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& rhs) const {
  if (cols() != rhs.rows()) throw InputError("matrix product shape mismatch");
  IntegerMatrix out(rows_, rhs.cols());
  std::map<std::uint32_t, Integer> acc;
  for (std::size_t j = 0; j < rhs.cols(); ++j) {
    acc.clear();
    for (const auto& [k, b] : rhs.columns_[j]) {
      for (const auto& [i, a] : columns_[k]) acc[i] += a * b;
    }
    Column col;
    for (auto& [i, v] : acc) {
      if (v != 0) col.push_back({i, std::move(v)});
    }
    out.columns_[j] = std::move(col);
  }
  return out;
}

IntegerMatrix IntegerMatrix::transposed() const {
  IntegerMatrix out(cols(), rows_);
  for (std::size_t j = 0; j < cols(); ++j) {
    for (const auto& [i, v] : columns_[j]) {
      out.columns_[i].push_back({static_cast<std::uint32_t>(j), v});
    }
  }
  return out;
}

IntegerMatrix IntegerMatrix::permuted(const std::vector<std::size_t>& perm_rows,
                                      const std::vector<std::size_t>& perm_cols) const {
  if (perm_rows.size() != rows_ || perm_cols.size() != cols()) {
    throw InputError("permutation size mismatch");
  }
  std::vector<std::uint32_t> new_row(rows_);
  for (std::size_t i = 0; i < rows_; ++i) new_row[perm_rows[i]] = static_cast<std::uint32_t>(i);
  IntegerMatrix out(rows_, cols());
  for (std::size_t j = 0; j < cols(); ++j) {
    Column col;
    for (const auto& [i, v] : columns_[perm_cols[j]]) col.push_back({new_row[i], v});
    std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
    out.columns_[j] = std::move(col);
  }
  return out;
}

std::vector<Integer> SmithResult::torsion() const {
  std::vector<Integer> out;
  for (const auto& d : invariant_factors) {
    if (d > 1) out.push_back(d);
  }
  return out;
}

namespace {

struct Overflow {};

// Integers in int64 with overflow detection; the caller retries with bigints.
struct CheckedInt {
  using value_type = std::int64_t;
  static value_type from(const Integer& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
      throw Overflow{};
    }
    return static_cast<std::int64_t>(v);
  }
  static bool is_unit(value_type v) { return v == 1 || v == -1; }
  static bool is_zero(value_type v) { return v == 0; }
  // k with a - k * u == 0 for a unit u.
  static value_type quotient(value_type a, value_type u) { return u == 1 ? a : checked_neg(a); }
  static value_type axpy(value_type a, value_type k, value_type b) {
    value_type prod;
    value_type out;
    if (__builtin_mul_overflow(k, b, &prod) || __builtin_sub_overflow(a, prod, &out)) throw Overflow{};
    return out;
  }
  static Integer to_integer(value_type v) { return Integer(v); }
  static value_type checked_neg(value_type a) {
    if (a == std::numeric_limits<std::int64_t>::min()) throw Overflow{};
    return -a;
  }
};

struct BigInt {
  using value_type = Integer;
  static value_type from(const Integer& v) { return v; }
  static bool is_unit(const value_type& v) { return v == 1 || v == -1; }
  static bool is_zero(const value_type& v) { return v == 0; }
  static value_type quotient(const value_type& a, const value_type& u) { return u == 1 ? a : value_type(-a); }
  static value_type axpy(const value_type& a, const value_type& k, const value_type& b) { return a - k * b; }
  static Integer to_integer(const value_type& v) { return v; }
};

struct ModP {
  using value_type = std::uint64_t;
  std::uint64_t p;
  value_type from(const Integer& v) const {
    Integer r = v % p;
    if (r < 0) r += p;
    return static_cast<std::uint64_t>(r);
  }
  static bool is_unit(value_type v) { return v != 0; }
  static bool is_zero(value_type v) { return v == 0; }
  value_type quotient(value_type a, value_type u) const { return mul_mod(a, inv_mod(u, p), p); }
  value_type axpy(value_type a, value_type k, value_type b) const {
    const std::uint64_t kb = mul_mod(k, b, p);
    return a >= kb ? a - kb : a + (p - kb);
  }
};

// Sparse elimination on unit pivots. Each pivot at (r, c) clears row r by
// column operations and then drops row r and column c, which leaves the
// remaining block equivalent to the original matrix minus one unit invariant
// factor. Columns with no unit entry are left for the caller.
template <class Ring>
class UnitEliminator {
 public:
  using T = typename Ring::value_type;
  using Column = std::vector<std::pair<std::uint32_t, T>>;

  UnitEliminator(const IntegerMatrix& m, Ring ring)
      : ring_(std::move(ring)),
        cols_(m.cols()),
        row_cols_(m.rows()),
        row_count_(m.rows(), 0),
        done_(m.cols(), 0),
        version_(m.cols(), 0) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      for (const auto& e : m.column(j)) {
        cols_[j].emplace_back(e.row, ring_.from(e.value));
        row_cols_[e.row].push_back(static_cast<std::uint32_t>(j));
        ++row_count_[e.row];
      }
    }
  }

  std::size_t run() {
    using Item = std::tuple<std::size_t, std::uint32_t, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (!cols_[j].empty()) heap.emplace(cols_[j].size(), static_cast<std::uint32_t>(j), 0);
    }
    while (!heap.empty()) {
      auto [nnz, c, ver] = heap.top();
      heap.pop();
      if (done_[c] || ver != version_[c] || cols_[c].empty()) continue;
      std::size_t best = cols_[c].size();
      for (std::size_t e = 0; e < cols_[c].size(); ++e) {
        if (!ring_.is_unit(cols_[c][e].second)) continue;
        if (best == cols_[c].size() || row_count_[cols_[c][e].first] < row_count_[cols_[c][best].first]) {
          best = e;
        }
      }
      if (best == cols_[c].size()) continue;
      eliminate(c, best, heap);
    }
    return pivots_;
  }

  // Columns still alive after run(); none of them holds a unit entry.
  std::vector<const Column*> leftover() const {
    std::vector<const Column*> out;
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (!done_[j] && !cols_[j].empty()) out.push_back(&cols_[j]);
    }
    return out;
  }

 private:
  template <class Heap>
  void eliminate(std::uint32_t c, std::size_t entry, Heap& heap) {
    const std::uint32_t r = cols_[c][entry].first;
    const T u = cols_[c][entry].second;
    const Column& pivot = cols_[c];
    auto& others = row_cols_[r];
    std::sort(others.begin(), others.end());
    others.erase(std::unique(others.begin(), others.end()), others.end());
    for (std::uint32_t j : others) {
      if (j == c || done_[j]) continue;
      auto& col = cols_[j];
      auto it = std::lower_bound(col.begin(), col.end(), r,
                                 [](const auto& e, std::uint32_t row) { return e.first < row; });
      if (it == col.end() || it->first != r) continue;
      const T k = ring_.quotient(it->second, u);
      col = axpy_column(j, col, k, pivot);
      ++version_[j];
      heap.emplace(col.size(), j, version_[j]);
    }
    others.clear();
    others.shrink_to_fit();
    for (const auto& e : pivot) --row_count_[e.first];
    done_[c] = 1;
    cols_[c].clear();
    ++pivots_;
  }

  // a - k * b, maintaining row bookkeeping for column j.
  Column axpy_column(std::uint32_t j, const Column& a, const T& k, const Column& b) {
    Column out;
    out.reserve(a.size() + b.size());
    std::size_t x = 0;
    std::size_t y = 0;
    while (x < a.size() || y < b.size()) {
      if (y == b.size() || (x < a.size() && a[x].first < b[y].first)) {
        out.push_back(a[x++]);
      } else if (x == a.size() || b[y].first < a[x].first) {
        const T zero{};
        T v = ring_.axpy(zero, k, b[y].second);
        if (!ring_.is_zero(v)) {
          row_cols_[b[y].first].push_back(j);
          ++row_count_[b[y].first];
          out.emplace_back(b[y].first, std::move(v));
        }
        ++y;
      } else {
        T v = ring_.axpy(a[x].second, k, b[y].second);
        if (ring_.is_zero(v)) {
          --row_count_[a[x].first];
        } else {
          out.emplace_back(a[x].first, std::move(v));
        }
        ++x;
        ++y;
      }
    }
    return out;
  }

  Ring ring_;
  std::vector<Column> cols_;
  std::vector<std::vector<std::uint32_t>> row_cols_;
  std::vector<std::uint32_t> row_count_;
  std::vector<char> done_;
  std::vector<std::uint32_t> version_;
  std::size_t pivots_ = 0;
};

// Diagonalizes a small dense block; returns the absolute diagonal entries.
std::vector<Integer> dense_diagonalize(std::vector<std::vector<Integer>> a) {
  std::vector<Integer> diag;
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (auto& row : a) std::swap(row[x], row[y]);
  };
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Smallest non-zero magnitude in the trailing block.
    std::size_t pi = rows;
    std::size_t pj = cols;
    for (std::size_t i = t; i < rows; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) {
          pi = i;
          pj = j;
        }
      }
    }
    if (pi == rows) break;
    std::swap(a[t], a[pi]);
    swap_cols(t, pj);
    while (true) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        const Integer q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        const Integer q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (clean) break;
      // A remainder is smaller than the pivot: move the smallest to (t, t).
      std::size_t bi = t;
      std::size_t bj = t;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] != 0 && abs(a[i][t]) < abs(a[bi][bj])) {
          bi = i;
          bj = t;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] != 0 && abs(a[t][j]) < abs(a[bi][bj])) {
          bi = t;
          bj = j;
        }
      }
      std::swap(a[t], a[bi]);
      swap_cols(t, bj);
    }
    diag.push_back(abs(a[t][t]));
  }
  return diag;
}

// Rewrites a list of positive integers into invariant factors with the same
// product structure: d_1 | d_2 | ... .
void normalize_factors(std::vector<Integer>& d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const Integer g = gcd(d[i], d[j]);
      const Integer l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  }
}

template <class Ring>
SmithResult smith_with(const IntegerMatrix& m) {
  UnitEliminator<Ring> elim(m, Ring{});
  const std::size_t units = elim.run();
  const auto leftover = elim.leftover();
  std::vector<std::uint32_t> rows;
  for (const auto* col : leftover) {
    for (const auto& e : *col) rows.push_back(e.first);
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  std::vector<std::vector<Integer>> dense(rows.size(), std::vector<Integer>(leftover.size()));
  for (std::size_t j = 0; j < leftover.size(); ++j) {
    for (const auto& e : *leftover[j]) {
      const auto i = std::lower_bound(rows.begin(), rows.end(), e.first) - rows.begin();
      dense[i][j] = Ring::to_integer(e.second);
    }
  }
  std::vector<Integer> rest = dense_diagonalize(std::move(dense));
  normalize_factors(rest);
  SmithResult result;
  result.rank = units + rest.size();
  result.invariant_factors.assign(units, Integer(1));
  result.invariant_factors.insert(result.invariant_factors.end(), rest.begin(), rest.end());
  return result;
}

}  // namespace

SmithResult smith_normal_form(const IntegerMatrix& m) {
  try {
    return smith_with<CheckedInt>(m);
  } catch (const Overflow&) {
    return smith_with<BigInt>(m);
  }
}

std::size_t rank_mod_p(const IntegerMatrix& m, std::uint64_t p) {
  if (!is_prime(p)) throw InputError("modulus " + std::to_string(p) + " is not prime");
  UnitEliminator<ModP> elim(m, ModP{p});
  return elim.run();
}

}  // namespace cbpd
