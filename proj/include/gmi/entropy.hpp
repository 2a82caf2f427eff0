#pragma once

#include <span>

#include "gmi/escort.hpp"
#include "gmi/tables.hpp"

namespace gmi {

/// Shannon entropy -sum p ln p in nats, with 0 ln 0 := 0.
double shannon_entropy(std::span<const double> dist);
double shannon_entropy(const ProbTable& dist);

/// MI(X,Y) = H(X) + H(Y) - H(X,Y). Values in (-1e-12, 0) from rounding are
/// clamped to 0; anything more negative raises InternalError since MI is
/// provably nonnegative.
double mutual_information(const ProbTable& joint);

/// 2n * MI of the power-escorted empirical table; the likelihood-ratio-style
/// cross-check statistic for the T_A/T_B decomposition.
double wilks_statistic(const CountsTable& counts, EscortParam lam);

}  // namespace gmi
