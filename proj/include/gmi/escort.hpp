#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gmi/tables.hpp"

namespace gmi {

/// Exponent of the power escort family g(p) = p^lambda. Must be positive;
/// the testing pipeline additionally requires lambda != 1, enforced where
/// the Z statistics are formed.
class EscortParam {
 public:
  explicit EscortParam(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0)) {
      throw DomainError("escort parameter lambda must be > 0");
    }
  }
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

/// A power-escorted table together with its normalizer c = sum p^lambda.
struct EscortTable {
  ProbTable escort;
  double c_lambda = 0.0;
};

/// q_{i,j} = p_{i,j}^lambda / sum_{s,t} p_{s,t}^lambda, with 0^lambda := 0
/// so zero cells stay zero and never contribute to the normalizer.
EscortTable power_escort_table(const ProbTable& dist, EscortParam lam);

/// One-dimensional escort; returns the escorted vector and the normalizer.
std::pair<std::vector<double>, double> power_escort_vector(
    std::span<const double> dist, EscortParam lam);

/// Inverse of the power escort: escorting with exponent 1/lambda.
ProbTable inverse_escort(const ProbTable& table, EscortParam lam);

}  // namespace gmi
