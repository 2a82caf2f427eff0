#include "gmi/escort.hpp"

#include <cmath>

namespace gmi {

namespace {

// Escorts raw cell values in place. Powers are taken relative to the
// largest cell, (p/pmax)^lambda, so very small probabilities raised to a
// large lambda stay clear of underflow; the normalizer is reassembled as
// pmax^lambda * sum of scaled powers.
double escort_cells(std::span<const double> src, double lambda,
                    std::vector<double>& out) {
  double pmax = 0.0;
  for (double p : src) {
    if (!(p >= 0.0)) throw DomainError("escort input cells must be nonnegative");
    pmax = std::max(pmax, p);
  }
  if (pmax <= 0.0) {
    throw DegenerateInput("escort input has no positive cell");
  }
  out.resize(src.size());
  double scaled_sum = 0.0;
  for (std::size_t k = 0; k < src.size(); ++k) {
    const double p = src[k];
    if (p <= 0.0) {
      out[k] = 0.0;
      continue;
    }
    const double w = p == pmax ? 1.0 : std::pow(p / pmax, lambda);
    out[k] = w;
    scaled_sum += w;
  }
  for (double& w : out) w /= scaled_sum;
  return std::exp(lambda * std::log(pmax) + std::log(scaled_sum));
}

void check_normalized(std::span<const double> dist) {
  double total = 0.0;
  for (double p : dist) total += p;
  if (total == 0.0) {
    throw DegenerateInput("escort input has no positive cell");
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("escort input must sum to 1");
  }
}

}  // namespace

EscortTable power_escort_table(const ProbTable& dist, EscortParam lam) {
  std::vector<double> cells;
  const double c = escort_cells(dist.cells(), lam.lambda(), cells);
  return EscortTable{ProbTable(dist.rows(), dist.cols(), std::move(cells)), c};
}

std::pair<std::vector<double>, double> power_escort_vector(
    std::span<const double> dist, EscortParam lam) {
  check_normalized(dist);
  std::vector<double> cells;
  const double c = escort_cells(dist, lam.lambda(), cells);
  return {std::move(cells), c};
}

ProbTable inverse_escort(const ProbTable& table, EscortParam lam) {
  return power_escort_table(table, EscortParam(1.0 / lam.lambda())).escort;
}

}  // namespace gmi
