#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cbpd {

using Integer = boost::multiprecision::cpp_int;

// Exact integer matrix stored by column; only non-zero entries are kept, in
// increasing row order.
class IntegerMatrix {
 public:
  struct Entry {
    std::uint32_t row;
    Integer value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  using Column = std::vector<Entry>;

  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}
  static IntegerMatrix from_dense(std::initializer_list<std::initializer_list<long long>> rows);
  static IntegerMatrix from_dense(const std::vector<std::vector<long long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  const Column& column(std::size_t j) const { return columns_[j]; }
  // Entries must be strictly increasing in row; zeros are dropped.
  void set_column(std::size_t j, Column column);
  void set(std::size_t r, std::size_t c, const Integer& value);
  Integer at(std::size_t r, std::size_t c) const;
  std::size_t nonzeros() const;
  bool is_zero() const;

  IntegerMatrix operator*(const IntegerMatrix& rhs) const;
  IntegerMatrix transposed() const;
  // Column j of the result is column perm_cols[j] of *this; row i of the
  // result is row perm_rows[i].
  IntegerMatrix permuted(const std::vector<std::size_t>& perm_rows,
                         const std::vector<std::size_t>& perm_cols) const;

  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::vector<Column> columns_;
};

struct SmithResult {
  std::size_t rank = 0;
  // d_1 | d_2 | ... | d_rank, all positive.
  std::vector<Integer> invariant_factors;
  // Factors exceeding 1.
  std::vector<Integer> torsion() const;
};

SmithResult smith_normal_form(const IntegerMatrix& m);

// Rank over the field with p elements; p prime.
std::size_t rank_mod_p(const IntegerMatrix& m, std::uint64_t p);

}  // namespace cbpd
