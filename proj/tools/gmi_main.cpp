// Command-line front end: run an independence test on a counts CSV, or run
// the Monte Carlo comparison study.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gmi/gmi.hpp"
#include "gmi/pearson.hpp"
#include "gmi/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitDegenerate = 3;

using nlohmann::ordered_json;

struct TestOptions {
  std::string csv_path;
  double lambda = 2.0;
  double alpha = 0.01;
  std::string method = "all";
  std::vector<int> dims;  // empty or {I, J}
  std::string format = "json";
  std::string out;
  double sparsity_threshold = 5.0;
  bool header = false;
};

struct SimulateOptions {
  std::vector<double> one_minus_p = {0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::int64_t> sizes = {30, 100, 500, 1000, 1500, 2000};
  std::string hypothesis = "both";
  double lambda = 2.0;
  double alpha = 0.01;
  std::int64_t replicates = 10000;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  int threads = 0;
};

int env_threads() {
  const char* env = std::getenv("GMI_THREADS");
  if (env == nullptr) return 0;
  try {
    return std::stoi(env);
  } catch (...) {
    return 0;
  }
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path);
  if (!out) {
    throw gmi::IoError("cannot open '" + out_path + "' for writing");
  }
  out << payload;
  if (!out.flush()) {
    throw gmi::IoError("write failure on '" + out_path + "'");
  }
}

void diagnostic(const std::string& error, const std::string& method,
                const std::string& message) {
  ordered_json d;
  d["error"] = error;
  if (!method.empty()) d["method"] = method;
  d["message"] = message;
  std::cerr << d.dump() << "\n";
}

ordered_json result_to_json(const gmi::TestResult& r) {
  ordered_json j;
  j["method"] = gmi::method_name(r.method);
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["reject"] = r.reject;
  j["alpha"] = r.alpha;
  if (r.lambda) j["lambda"] = *r.lambda;
  if (r.sigma2_hat) j["sigma2_hat"] = *r.sigma2_hat;
  if (r.df) j["df"] = *r.df;
  j["i_hat"] = r.i_hat;
  j["j_hat"] = r.j_hat;
  j["warnings"] = r.warnings;
  return j;
}

std::string results_to_tsv(const std::vector<gmi::TestResult>& results) {
  std::string out =
      "method\tstatistic\tp_value\treject\talpha\tlambda\tsigma2_hat\tdf\t"
      "i_hat\tj_hat\twarnings\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
  };
  for (const gmi::TestResult& r : results) {
    std::string warnings;
    for (const std::string& w : r.warnings) {
      if (!warnings.empty()) warnings += "; ";
      warnings += w;
    }
    out += gmi::method_name(r.method) + '\t' + num(r.statistic) + '\t' +
           num(r.p_value) + '\t' + (r.reject ? "true" : "false") + '\t' +
           num(r.alpha) + '\t' + (r.lambda ? num(*r.lambda) : "") + '\t' +
           (r.sigma2_hat ? num(*r.sigma2_hat) : "") + '\t' +
           (r.df ? std::to_string(*r.df) : "") + '\t' +
           std::to_string(r.i_hat) + '\t' + std::to_string(r.j_hat) + '\t' +
           warnings + '\n';
  }
  return out;
}

std::vector<gmi::Method> requested_methods(const std::string& method) {
  if (method == "all") {
    return {std::begin(gmi::kAllMethods), std::end(gmi::kAllMethods)};
  }
  return {gmi::method_from_name(method)};
}

bool is_z_method(gmi::Method m) {
  return m == gmi::Method::ZAB || m == gmi::Method::ZA || m == gmi::Method::ZB;
}

int cmd_test(const TestOptions& opt) {
  std::vector<gmi::Method> methods;
  try {
    methods = requested_methods(opt.method);
  } catch (const gmi::DomainError& e) {
    diagnostic("DomainError", "", e.what());
    return kExitInputError;
  }
  bool wants_z = false;
  for (gmi::Method m : methods) wants_z = wants_z || is_z_method(m);
  if (wants_z && opt.lambda == 1.0) {
    diagnostic("DomainError", "",
               "lambda = 1 gives a degenerate variance; the Z tests require "
               "lambda != 1");
    return kExitInputError;
  }

  std::optional<gmi::CountsTable> counts;
  try {
    counts = gmi::read_counts_csv(opt.csv_path, opt.header);
  } catch (const gmi::Error& e) {
    diagnostic("InputError", "", e.what());
    return kExitInputError;
  }

  std::optional<std::pair<int, int>> nominal;
  std::string dims_warning;
  if (opt.dims.size() == 2) {
    nominal = {opt.dims[0], opt.dims[1]};
  } else {
    nominal = {static_cast<int>(counts->rows()),
               static_cast<int>(counts->cols())};
    dims_warning =
        "nominal dimensions not supplied; using the input matrix shape " +
        std::to_string(counts->rows()) + "x" + std::to_string(counts->cols());
  }

  std::vector<gmi::TestResult> results;
  bool degenerate = false;
  for (gmi::Method m : methods) {
    try {
      if (is_z_method(m)) {
        results.push_back(gmi::gmi_test(*counts, gmi::EscortParam(opt.lambda),
                                        opt.alpha, m, opt.sparsity_threshold));
      } else if (m == gmi::Method::PearsonObserved) {
        results.push_back(
            gmi::pearson_test(*counts, opt.alpha, gmi::DfMode::Observed));
      } else {
        gmi::TestResult r = gmi::pearson_test(
            *counts, opt.alpha, gmi::DfMode::Theoretical, nominal);
        if (!dims_warning.empty()) r.warnings.push_back(dims_warning);
        results.push_back(std::move(r));
      }
    } catch (const gmi::DegenerateVariance& e) {
      diagnostic("DegenerateVariance", gmi::method_name(m), e.what());
      degenerate = true;
    } catch (const gmi::InsufficientSupport& e) {
      diagnostic("InsufficientSupport", gmi::method_name(m), e.what());
      degenerate = true;
    } catch (const gmi::InvalidDf& e) {
      diagnostic("InvalidDf", gmi::method_name(m), e.what());
      degenerate = true;
    } catch (const gmi::Error& e) {
      diagnostic("Error", gmi::method_name(m), e.what());
      return kExitInputError;
    }
  }

  std::string payload;
  if (opt.format == "tsv") {
    payload = results_to_tsv(results);
  } else {
    ordered_json arr = ordered_json::array();
    for (const gmi::TestResult& r : results) arr.push_back(result_to_json(r));
    payload = arr.dump(2) + "\n";
  }
  try {
    emit(payload, opt.out);
  } catch (const gmi::IoError& e) {
    diagnostic("IoError", "", e.what());
    return kExitInputError;
  }
  return degenerate ? kExitDegenerate : kExitOk;
}

int cmd_simulate(const SimulateOptions& opt) {
  if (opt.lambda == 1.0) {
    diagnostic("DomainError", "",
               "lambda = 1 is excluded from the testing pipeline");
    return kExitInputError;
  }
  std::vector<gmi::Hypothesis> hypotheses;
  if (opt.hypothesis == "h0") {
    hypotheses = {gmi::Hypothesis::H0};
  } else if (opt.hypothesis == "ha") {
    hypotheses = {gmi::Hypothesis::Ha};
  } else if (opt.hypothesis == "both") {
    hypotheses = {gmi::Hypothesis::H0, gmi::Hypothesis::Ha};
  } else {
    diagnostic("DomainError", "", "hypothesis must be one of h0, ha, both");
    return kExitInputError;
  }

  std::vector<gmi::ScenarioResult> results;
  try {
    for (double omp : opt.one_minus_p) {
      for (gmi::Hypothesis h : hypotheses) {
        gmi::ScenarioSpec spec;
        spec.p = 1.0 - omp;
        spec.lambda = opt.lambda;
        spec.alpha = opt.alpha;
        spec.sample_sizes = opt.sizes;
        spec.replicates = opt.replicates;
        spec.base_seed = opt.seed;
        spec.hypothesis = h;
        results.push_back(gmi::run_scenario(spec, opt.threads));
      }
    }
  } catch (const gmi::DomainError& e) {
    diagnostic("DomainError", "", e.what());
    return kExitInputError;
  }

  const std::string payload = opt.format == "tsv"
                                  ? gmi::report_to_tsv(results)
                                  : gmi::report_to_json(results);
  try {
    emit(payload, opt.out);
  } catch (const gmi::IoError& e) {
    diagnostic("IoError", "", e.what());
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Independence tests for contingency tables via generalized "
               "(escort) mutual information, with a Pearson chi-squared "
               "baseline and a Monte Carlo comparison harness"};
  app.require_subcommand(1);

  TestOptions topt;
  CLI::App* test =
      app.add_subcommand("test", "Run independence tests on a counts CSV");
  test->add_option("csv", topt.csv_path, "Counts CSV (nonnegative integers)")
      ->required();
  test->add_option("--lambda", topt.lambda,
                   "Escort exponent (must not be 1 for the Z tests)")
      ->capture_default_str();
  test->add_option("--alpha", topt.alpha, "Significance level")
      ->capture_default_str();
  test->add_option("--method", topt.method,
                   "zab|za|zb|pearson-observed|pearson-theoretical|all")
      ->check(CLI::IsMember({"zab", "za", "zb", "pearson-observed",
                             "pearson-theoretical", "all"}))
      ->capture_default_str();
  test->add_option("--dims", topt.dims, "Nominal I,J for pearson-theoretical")
      ->delimiter(',')
      ->expected(2);
  test->add_option("--format", topt.format, "json|tsv")
      ->check(CLI::IsMember({"json", "tsv"}))
      ->capture_default_str();
  test->add_option("--out", topt.out, "Write the report here (default stdout)");
  test->add_option("--sparsity-threshold", topt.sparsity_threshold,
                   "Advisory threshold on n/(I_hat*J_hat)")
      ->capture_default_str();
  test->add_flag("--header", topt.header, "Skip one CSV header line");

  SimulateOptions sopt;
  sopt.threads = env_threads();
  CLI::App* simulate = app.add_subcommand(
      "simulate",
      "Monte Carlo convergence/power comparison on the 11x11 sparse family");
  simulate
      ->add_option("--one-minus-p", sopt.one_minus_p,
                   "Marginal head masses 1-p to sweep")
      ->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--sizes", sopt.sizes, "Sample sizes")
      ->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--hypothesis", sopt.hypothesis, "h0|ha|both")
      ->check(CLI::IsMember({"h0", "ha", "both"}))
      ->capture_default_str();
  simulate->add_option("--lambda", sopt.lambda, "Escort exponent")
      ->capture_default_str();
  simulate->add_option("--alpha", sopt.alpha, "Significance level")
      ->capture_default_str();
  simulate
      ->add_option("--replicates", sopt.replicates,
                   "Replicates per (scenario, n) cell")
      ->capture_default_str();
  simulate->add_option("--seed", sopt.seed, "Base seed")->capture_default_str();
  simulate->add_option("--format", sopt.format, "json|tsv")
      ->check(CLI::IsMember({"json", "tsv"}))
      ->capture_default_str();
  simulate->add_option("--out", sopt.out,
                       "Write the report here (default stdout)");
  simulate->add_option("--threads", sopt.threads,
                       "Worker threads (0 = auto; env GMI_THREADS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    app.exit(e);
    return kExitInputError;
  }

  if (test->parsed()) return cmd_test(topt);
  return cmd_simulate(sopt);
}
