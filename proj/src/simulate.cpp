#include "gmi/simulate.hpp"

#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include <json.hpp>

#include "gmi/gmi.hpp"
#include "gmi/pearson.hpp"
#include "gmi/special.hpp"

namespace gmi {

namespace {

constexpr std::size_t kMethodCount = std::size(kAllMethods);

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (mix64(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

std::uint64_t scenario_key(const ScenarioSpec& spec) {
  std::uint64_t key = combine(0, static_cast<std::uint64_t>(spec.dims_i));
  key = combine(key, static_cast<std::uint64_t>(spec.dims_j));
  key = combine(key, std::bit_cast<std::uint64_t>(spec.p));
  key = combine(key, std::bit_cast<std::uint64_t>(spec.lambda));
  key = combine(key, spec.hypothesis == Hypothesis::H0 ? 0ULL : 1ULL);
  return key;
}

std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t key,
                             std::int64_t n, std::int64_t rep) {
  std::uint64_t s = combine(base_seed, key);
  s = combine(s, static_cast<std::uint64_t>(n));
  return combine(s, static_cast<std::uint64_t>(rep));
}

struct MethodTally {
  std::int64_t rejected = 0;
  std::int64_t aborted = 0;
};

void validate(const ScenarioSpec& spec) {
  if (spec.dims_i < 2 || spec.dims_j < 2) {
    throw DomainError("scenario dimensions must be at least 2x2");
  }
  if (!(spec.p > 0.0 && spec.p < 1.0)) {
    throw DomainError("scenario p must lie in (0,1)");
  }
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    throw DomainError("scenario alpha must lie in (0,1)");
  }
  if (spec.replicates < 1) {
    throw DomainError("scenario needs at least one replicate");
  }
  if (spec.hypothesis == Hypothesis::Ha && spec.dims_i != spec.dims_j) {
    throw DomainError("the Ha construction requires a square table");
  }
  for (std::int64_t n : spec.sample_sizes) {
    if (n < 1) throw DomainError("sample sizes must be positive");
  }
}

int resolve_threads(int threads, std::int64_t replicates) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  if (threads < 1) threads = 1;
  return static_cast<int>(
      std::min<std::int64_t>(threads, replicates));
}

// Tallies one sampled table against all five tests. Index order matches
// kAllMethods.
void tally_replicate(const CountsTable& counts, const EscortParam& lam,
                     double alpha, double z_crit, int df_theoretical,
                     std::array<MethodTally, kMethodCount>& tally) {
  try {
    const ZStatistics zs = z_statistics(counts, lam);
    if (std::abs(zs.z_ab) > z_crit) ++tally[0].rejected;
    if (std::abs(zs.z_a) > z_crit) ++tally[1].rejected;
    if (std::abs(zs.z_b) > z_crit) ++tally[2].rejected;
  } catch (const DegenerateVariance&) {
    ++tally[0].aborted;
    ++tally[1].aborted;
    ++tally[2].aborted;
  } catch (const InsufficientSupport&) {
    ++tally[0].aborted;
    ++tally[1].aborted;
    ++tally[2].aborted;
  }
  try {
    const double t = pearson_statistic(counts);
    const ObservedDims dims = observed_dims(counts);
    const int df_obs = (dims.i_hat - 1) * (dims.j_hat - 1);
    if (chisq_sf(t, df_obs) < alpha) ++tally[3].rejected;
    if (chisq_sf(t, df_theoretical) < alpha) ++tally[4].rejected;
  } catch (const InsufficientSupport&) {
    ++tally[3].aborted;
    ++tally[4].aborted;
  } catch (const InvalidDf&) {
    ++tally[3].aborted;
    ++tally[4].aborted;
  }
}

}  // namespace

std::string hypothesis_name(Hypothesis h) {
  return h == Hypothesis::H0 ? "h0" : "ha";
}

double ScenarioResult::rate(Method m, std::int64_t n) const {
  for (const CellTally& c : cells) {
    if (c.method == m && c.n == n) return c.rate;
  }
  throw DomainError("no cell for that (method, n) pair");
}

std::map<Method, std::int64_t> ScenarioResult::degenerate_counts() const {
  std::map<Method, std::int64_t> out;
  for (Method m : kAllMethods) out[m] = 0;
  for (const CellTally& c : cells) out[c.method] += c.aborted;
  return out;
}

ProbTable build_h0_distribution(int dims_i, int dims_j, double p) {
  if (dims_i < 2 || dims_j < 2) {
    throw DomainError("H0 construction needs at least 2x2");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("H0 construction needs p in (0,1)");
  }
  auto marginal = [p](int dims) {
    std::vector<double> m(dims, p / static_cast<double>(dims - 1));
    m[0] = 1.0 - p;
    return m;
  };
  const std::vector<double> rows = marginal(dims_i);
  const std::vector<double> cols = marginal(dims_j);
  std::vector<double> cells(static_cast<std::size_t>(dims_i) * dims_j);
  for (int i = 0; i < dims_i; ++i) {
    for (int j = 0; j < dims_j; ++j) {
      cells[static_cast<std::size_t>(i) * dims_j + j] = rows[i] * cols[j];
    }
  }
  return ProbTable(dims_i, dims_j, std::move(cells));
}

ProbTable build_ha_distribution(int dims_i, double p) {
  const ProbTable h0 = build_h0_distribution(dims_i, dims_i, p);
  std::vector<double> cells(h0.cells().begin(), h0.cells().end());
  const double diag = p * p / static_cast<double>(dims_i - 1);
  for (int i = 1; i < dims_i; ++i) {
    for (int j = 1; j < dims_i; ++j) {
      cells[static_cast<std::size_t>(i) * dims_i + j] = i == j ? diag : 0.0;
    }
  }
  return ProbTable(dims_i, dims_i, std::move(cells));
}

ScenarioResult run_scenario(const ScenarioSpec& spec, int threads) {
  validate(spec);
  const auto started = std::chrono::steady_clock::now();
  const EscortParam lam(spec.lambda);
  if (spec.lambda == 1.0) {
    throw DomainError("lambda = 1 is excluded from the testing pipeline");
  }
  const ProbTable dist =
      spec.hypothesis == Hypothesis::H0
          ? build_h0_distribution(spec.dims_i, spec.dims_j, spec.p)
          : build_ha_distribution(spec.dims_i, spec.p);
  const double z_crit = normal_quantile(1.0 - spec.alpha / 2.0);
  const int df_theoretical = (spec.dims_i - 1) * (spec.dims_j - 1);
  const std::uint64_t key = scenario_key(spec);
  const int workers = resolve_threads(threads, spec.replicates);

  ScenarioResult result;
  result.spec = spec;
  for (std::int64_t n : spec.sample_sizes) {
    std::vector<std::array<MethodTally, kMethodCount>> partial(workers);
    std::vector<std::exception_ptr> worker_error(workers);
    auto work = [&](int w) {
      try {
        const std::int64_t lo = spec.replicates * w / workers;
        const std::int64_t hi = spec.replicates * (w + 1) / workers;
        for (std::int64_t rep = lo; rep < hi; ++rep) {
          const CountsTable counts = sample_multinomial(
              dist, n, replicate_seed(spec.base_seed, key, n, rep));
          tally_replicate(counts, lam, spec.alpha, z_crit, df_theoretical,
                          partial[w]);
        }
      } catch (...) {
        worker_error[w] = std::current_exception();
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& err : worker_error) {
      if (err) std::rethrow_exception(err);
    }
    for (std::size_t m = 0; m < kMethodCount; ++m) {
      CellTally cell;
      cell.n = n;
      cell.method = kAllMethods[m];
      for (const auto& p : partial) {
        cell.rejected += p[m].rejected;
        cell.aborted += p[m].aborted;
      }
      const std::int64_t denom = spec.replicates - cell.aborted;
      cell.rate = denom > 0 ? static_cast<double>(cell.rejected) /
                                  static_cast<double>(denom)
                            : std::numeric_limits<double>::quiet_NaN();
      result.cells.push_back(cell);
    }
  }
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return result;
}

std::vector<ScenarioResult> grid_report(
    const std::vector<double>& p_values,
    const std::vector<std::int64_t>& sizes, std::int64_t replicates,
    std::uint64_t base_seed, double lambda, double alpha, int threads) {
  std::vector<ScenarioResult> out;
  for (double p : p_values) {
    for (Hypothesis h : {Hypothesis::H0, Hypothesis::Ha}) {
      ScenarioSpec spec;
      spec.p = p;
      spec.lambda = lambda;
      spec.alpha = alpha;
      spec.sample_sizes = sizes;
      spec.replicates = replicates;
      spec.base_seed = base_seed;
      spec.hypothesis = h;
      out.push_back(run_scenario(spec, threads));
    }
  }
  return out;
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string report_to_tsv(std::span<const ScenarioResult> results) {
  std::string out = "one_minus_p\tn\tmethod\thypothesis\trate\taborted\n";
  for (const ScenarioResult& r : results) {
    for (const CellTally& c : r.cells) {
      out += format_double(1.0 - r.spec.p);
      out += '\t';
      out += std::to_string(c.n);
      out += '\t';
      out += method_name(c.method);
      out += '\t';
      out += hypothesis_name(r.spec.hypothesis);
      out += '\t';
      out += format_double(c.rate);
      out += '\t';
      out += std::to_string(c.aborted);
      out += '\n';
    }
  }
  return out;
}

std::string report_to_json(std::span<const ScenarioResult> results) {
  nlohmann::ordered_json doc;
  doc["scenarios"] = nlohmann::ordered_json::array();
  for (const ScenarioResult& r : results) {
    nlohmann::ordered_json spec;
    spec["dims"] = {r.spec.dims_i, r.spec.dims_j};
    spec["p"] = r.spec.p;
    spec["one_minus_p"] = 1.0 - r.spec.p;
    spec["lambda"] = r.spec.lambda;
    spec["alpha"] = r.spec.alpha;
    spec["sample_sizes"] = r.spec.sample_sizes;
    spec["replicates"] = r.spec.replicates;
    spec["base_seed"] = r.spec.base_seed;
    spec["hypothesis"] = hypothesis_name(r.spec.hypothesis);

    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const CellTally& c : r.cells) {
      nlohmann::ordered_json cell;
      cell["n"] = c.n;
      cell["method"] = method_name(c.method);
      cell["rejected"] = c.rejected;
      cell["aborted"] = c.aborted;
      if (std::isnan(c.rate)) {
        cell["rate"] = nullptr;
      } else {
        cell["rate"] = c.rate;
      }
      cells.push_back(std::move(cell));
    }

    nlohmann::ordered_json degenerate;
    for (const auto& [method, count] : r.degenerate_counts()) {
      degenerate[method_name(method)] = count;
    }

    nlohmann::ordered_json entry;
    entry["spec"] = std::move(spec);
    entry["cells"] = std::move(cells);
    entry["degenerate_counts"] = std::move(degenerate);
    doc["scenarios"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

}  // namespace gmi
