#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gmi/errors.hpp"

namespace gmi {

/// Observed I x J frequency table of two categorical variables.
/// Immutable after construction; every cell is >= 0 and total() is the
/// sample size n.
class CountsTable {
 public:
  CountsTable(std::size_t rows, std::size_t cols,
              std::vector<std::int64_t> cells);

  static CountsTable from_rows(
      const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t operator()(std::size_t i, std::size_t j) const {
    return cells_[i * cols_ + j];
  }
  std::int64_t total() const { return total_; }
  std::span<const std::int64_t> cells() const { return cells_; }

  bool operator==(const CountsTable&) const = default;

 private:
  std::size_t rows_, cols_;
  std::vector<std::int64_t> cells_;
  std::int64_t total_;
};

/// I x J joint probability table with cached marginals. Cells are
/// nonnegative and sum to 1 within 1e-12 (validated on construction).
class ProbTable {
 public:
  ProbTable(std::size_t rows, std::size_t cols, std::vector<double> cells);

  static ProbTable from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const {
    return cells_[i * cols_ + j];
  }
  std::span<const double> cells() const { return cells_; }
  const std::vector<double>& row_marginals() const { return row_marg_; }
  const std::vector<double>& col_marginals() const { return col_marg_; }

 private:
  std::size_t rows_, cols_;
  std::vector<double> cells_;
  std::vector<double> row_marg_, col_marg_;
};

/// Counts of rows and columns that actually received observations.
struct ObservedDims {
  int i_hat = 0;
  int j_hat = 0;
};

/// Plug-in (empirical) distribution f_{i,j} / n.
ProbTable empirical(const CountsTable& table);

/// Number of rows / columns with a positive total.
ObservedDims observed_dims(const CountsTable& table);

/// Outer product of the table's marginals: the independent distribution
/// with the same marginals.
ProbTable product_of_marginals(const ProbTable& dist);

/// One multinomial(n, dist) draw. Deterministic for a fixed
/// (dist, n, seed); holds no state between calls.
CountsTable sample_multinomial(const ProbTable& dist, std::int64_t n,
                               std::uint64_t seed);

/// CSV of nonnegative integers, one table row per line, no header by
/// default.
CountsTable read_counts_csv(const std::string& path, bool skip_header = false);
void write_counts_csv(const CountsTable& table, const std::string& path);

}  // namespace gmi
