#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmi/errors.hpp"

namespace gmi {

/// The five test variants the harness compares.
enum class Method {
  ZAB,
  ZA,
  ZB,
  PearsonObserved,
  PearsonTheoretical,
};

/// Canonical ordering for reports: zab, za, zb, pearson-observed,
/// pearson-theoretical.
inline constexpr Method kAllMethods[] = {
    Method::ZAB, Method::ZA, Method::ZB, Method::PearsonObserved,
    Method::PearsonTheoretical};

std::string method_name(Method m);
Method method_from_name(const std::string& name);

/// Outcome of one test run on one counts table.
struct TestResult {
  Method method = Method::ZAB;
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double alpha = 0.0;
  std::optional<double> lambda;      // GMI variants only
  std::optional<double> sigma2_hat;  // GMI variants only
  std::optional<int> df;             // Pearson variants only
  int i_hat = 0;
  int j_hat = 0;
  std::vector<std::string> warnings;
};

}  // namespace gmi
