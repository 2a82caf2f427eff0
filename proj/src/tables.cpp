#include "gmi/tables.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

namespace gmi {

namespace {
constexpr double kProbTolerance = 1e-12;
}

CountsTable::CountsTable(std::size_t rows, std::size_t cols,
                         std::vector<std::int64_t> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)), total_(0) {
  if (rows_ < 1 || cols_ < 1) {
    throw DomainError("counts table must have at least one row and column");
  }
  if (cells_.size() != rows_ * cols_) {
    throw DomainError("counts table cell vector has wrong length");
  }
  for (std::int64_t c : cells_) {
    if (c < 0) {
      throw DomainError("counts table cells must be nonnegative");
    }
    total_ += c;
  }
}

CountsTable CountsTable::from_rows(
    const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw DomainError("counts table must have at least one row and column");
  }
  const std::size_t cols = rows.front().size();
  std::vector<std::int64_t> cells;
  cells.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) {
      throw DomainError("counts table rows must all have the same length");
    }
    cells.insert(cells.end(), r.begin(), r.end());
  }
  return CountsTable(rows.size(), cols, std::move(cells));
}

ProbTable::ProbTable(std::size_t rows, std::size_t cols,
                     std::vector<double> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (rows_ < 1 || cols_ < 1) {
    throw DomainError("probability table must have at least one row and column");
  }
  if (cells_.size() != rows_ * cols_) {
    throw DomainError("probability table cell vector has wrong length");
  }
  row_marg_.assign(rows_, 0.0);
  col_marg_.assign(cols_, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const double p = cells_[i * cols_ + j];
      if (!(p >= 0.0)) {
        throw DomainError("probability table cells must be nonnegative");
      }
      row_marg_[i] += p;
      col_marg_[j] += p;
      total += p;
    }
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    throw DomainError("probability table cells must sum to 1 (got " +
                      std::to_string(total) + ")");
  }
}

ProbTable ProbTable::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw DomainError("probability table must have at least one row and column");
  }
  const std::size_t cols = rows.front().size();
  std::vector<double> cells;
  cells.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) {
      throw DomainError("probability table rows must all have the same length");
    }
    cells.insert(cells.end(), r.begin(), r.end());
  }
  return ProbTable(rows.size(), cols, std::move(cells));
}

ProbTable empirical(const CountsTable& table) {
  if (table.total() < 1) {
    throw ZeroSample("empirical distribution needs n >= 1");
  }
  const double n = static_cast<double>(table.total());
  std::vector<double> cells(table.cells().size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    cells[k] = static_cast<double>(table.cells()[k]) / n;
  }
  return ProbTable(table.rows(), table.cols(), std::move(cells));
}

ObservedDims observed_dims(const CountsTable& table) {
  if (table.total() < 1) {
    throw ZeroSample("observed dimensions need n >= 1");
  }
  ObservedDims dims;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      if (table(i, j) > 0) {
        ++dims.i_hat;
        break;
      }
    }
  }
  for (std::size_t j = 0; j < table.cols(); ++j) {
    for (std::size_t i = 0; i < table.rows(); ++i) {
      if (table(i, j) > 0) {
        ++dims.j_hat;
        break;
      }
    }
  }
  return dims;
}

ProbTable product_of_marginals(const ProbTable& dist) {
  std::vector<double> cells(dist.rows() * dist.cols());
  for (std::size_t i = 0; i < dist.rows(); ++i) {
    for (std::size_t j = 0; j < dist.cols(); ++j) {
      cells[i * dist.cols() + j] =
          dist.row_marginals()[i] * dist.col_marginals()[j];
    }
  }
  return ProbTable(dist.rows(), dist.cols(), std::move(cells));
}

CountsTable sample_multinomial(const ProbTable& dist, std::int64_t n,
                               std::uint64_t seed) {
  if (n < 1) {
    throw DomainError("multinomial sample size must be >= 1");
  }
  std::mt19937_64 rng(seed);
  const auto probs = dist.cells();

  // Chain of conditional binomials over cells in row-major order: cell k
  // receives Binomial(remaining, p_k / mass_left) successes.
  std::vector<std::int64_t> cells(probs.size(), 0);
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] > 0.0) last_positive = k;
  }
  std::int64_t remaining = n;
  double mass_left = 1.0;
  for (std::size_t k = 0; k <= last_positive && remaining > 0; ++k) {
    const double p = probs[k];
    if (p <= 0.0) continue;
    if (k == last_positive) {
      cells[k] = remaining;
      remaining = 0;
      break;
    }
    const double cond = std::clamp(p / mass_left, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> binom(remaining, cond);
    const std::int64_t draw = binom(rng);
    cells[k] = draw;
    remaining -= draw;
    mass_left -= p;
  }
  return CountsTable(dist.rows(), dist.cols(), std::move(cells));
}

namespace {

std::vector<std::int64_t> parse_csv_line(const std::string& line,
                                         std::size_t line_no) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    std::size_t lo = pos, hi = comma;
    while (lo < hi && std::isspace(static_cast<unsigned char>(line[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(line[hi - 1])))
      --hi;
    if (lo == hi) {
      throw ParseError("empty field on line " + std::to_string(line_no));
    }
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(&line[lo], &line[hi], value);
    if (ec != std::errc{} || ptr != &line[hi]) {
      throw ParseError("non-integer field '" + line.substr(lo, hi - lo) +
                       "' on line " + std::to_string(line_no));
    }
    if (value < 0) {
      throw ParseError("negative count on line " + std::to_string(line_no));
    }
    out.push_back(value);
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return out;
}

}  // namespace

CountsTable read_counts_csv(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::vector<std::vector<std::int64_t>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && skip_header) continue;
    if (line.empty()) continue;
    std::vector<std::int64_t> row = parse_csv_line(line, line_no);
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ragged row on line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) {
    throw IoError("read failure on '" + path + "'");
  }
  if (rows.empty()) {
    throw ParseError("no table rows in '" + path + "'");
  }
  return CountsTable::from_rows(rows);
}

void write_counts_csv(const CountsTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      if (j > 0) out << ',';
      out << table(i, j);
    }
    out << '\n';
  }
  out.flush();
  if (!out) {
    throw IoError("write failure on '" + path + "'");
  }
}

}  // namespace gmi
