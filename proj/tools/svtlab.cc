// Copyright 2026 The svtlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// svtlab: audits, benchmarks and budget helpers for the sparse vector
// technique.
//
//   svtlab audit --variant alg5 --counterexample thm2 --eps 1
//   svtlab audit --variant alg1 --family adversarial --len 4 --c 2 --eps 1
//   svtlab bench --zipf 10000:1000000 --c 50,100 --eps 0.1 --methods em
//   svtlab gen-zipf --items 10000 --records 1000000 --out zipf.csv
//   svtlab split --eps 0.1 --c 1
//   svtlab bounds --k 100 --beta 0.1 --eps 1
//
// Exit codes: 0 ok, 1 data error, 2 usage error, 3 audit found a violation.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>
#include "svtlab/audit.h"
#include "svtlab/bench.h"
#include "svtlab/budget.h"
#include "svtlab/errors.h"
#include "svtlab/exponential_mechanism.h"
#include "svtlab/svt.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;
constexpr int kExitViolation = 3;

// Raised for flag combinations CLI11 cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AuditOptions {
  std::string variant;
  std::string counterexample;
  std::string family;
  std::string instance_file;
  std::size_t len = 4;
  std::size_t c = 1;
  std::size_t m = 5;
  double eps = 1.0;
  std::vector<double> split;
  bool monotonic = false;
  std::string method = "quadrature";
  std::size_t samples = 1000000;
  std::optional<double> claim;
  std::string out;
};

struct BenchOptions {
  std::string dataset;
  std::string histogram;
  std::string zipf;
  std::vector<std::size_t> cs;
  double eps = 0.1;
  std::vector<std::string> methods;
  std::size_t trials = 100;
  std::string out;
  std::string summary;
};

struct ZipfOptions {
  std::size_t items = 10000;
  std::size_t records = 1000000;
  std::string out;
};

struct SplitOptions {
  double eps = 1.0;
  std::size_t c = 1;
  bool monotonic = false;
};

struct BoundsOptions {
  int k = 100;
  double beta = 0.1;
  double eps = 1.0;
};

// Writes to the named file, or to stdout when the name is empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw svtlab::DataError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

svtlab::SvtConfig BuildConfig(const AuditOptions& o) {
  const svtlab::Variant v = svtlab::ParseVariant(o.variant);
  svtlab::SvtConfig config = svtlab::SvtConfig::Fixed(v, o.eps, o.c);
  if (!o.split.empty()) {
    if (o.split.size() < 2 || o.split.size() > 3) {
      throw UsageError("--split takes eps1,eps2[,eps3]");
    }
    config.split = svtlab::BudgetSplit{o.split[0], o.split[1],
                                       o.split.size() == 3 ? o.split[2] : 0.0};
    config.epsilon = config.split->Total();
  } else if (v == svtlab::Variant::kAlg7) {
    config.split = svtlab::BudgetSplit{o.eps / 2, o.eps - o.eps / 2, 0.0};
  }
  config.monotonic = o.monotonic;
  svtlab::ValidateConfig(config);
  return config;
}

svtlab::Answer ParsePatternEntry(const nlohmann::json& j) {
  if (j.is_number()) return svtlab::Answer::Numeric(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "B" || s == "below") return svtlab::Answer::Below();
    if (s == "A" || s == "above") return svtlab::Answer::Above();
  }
  throw svtlab::DataError("pattern entries are \"B\", \"A\" or a number");
}

svtlab::NeighborInstance ParseInstance(const nlohmann::json& j,
                                       std::size_t index) {
  svtlab::NeighborInstance inst;
  inst.id = j.value("id", "instance" + std::to_string(index));
  inst.scores_d = j.at("scores_d").get<std::vector<double>>();
  inst.scores_d_prime = j.at("scores_d_prime").get<std::vector<double>>();
  inst.delta = j.value("delta", 1.0);
  if (j.contains("thresholds")) {
    inst.thresholds = j.at("thresholds").get<std::vector<double>>();
  }
  const nlohmann::json& pattern = j.at("pattern");
  if (pattern.is_string()) {
    for (char ch : pattern.get<std::string>()) {
      inst.pattern.push_back(ParsePatternEntry(std::string(1, ch)));
    }
  } else {
    for (const auto& e : pattern) inst.pattern.push_back(ParsePatternEntry(e));
  }
  return inst;
}

std::vector<svtlab::NeighborInstance> ReadInstanceFile(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw svtlab::DataError("cannot open instance file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
    std::vector<svtlab::NeighborInstance> out;
    const nlohmann::json& list =
        doc.is_object() && doc.contains("instances") ? doc.at("instances")
                                                     : doc;
    if (list.is_array()) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        out.push_back(ParseInstance(list[i], i));
      }
    } else {
      out.push_back(ParseInstance(list, 0));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw svtlab::DataError(path + ": " + e.what());
  }
}

int RunAudit(const AuditOptions& o, std::uint64_t seed) {
  const int sources = !o.counterexample.empty() + !o.family.empty() +
                      !o.instance_file.empty();
  if (sources != 1) {
    throw UsageError(
        "give exactly one of --counterexample, --family, --instance-file");
  }
  if (!o.family.empty() && o.family != "adversarial") {
    throw UsageError("the only instance family is 'adversarial'");
  }
  if (o.method != "quadrature" && o.method != "montecarlo") {
    throw UsageError("--method is quadrature or montecarlo");
  }
  const svtlab::SvtConfig config = BuildConfig(o);
  const double claim = o.claim.value_or(config.epsilon);

  std::vector<svtlab::NeighborInstance> instances;
  std::optional<std::size_t> size_m;
  if (!o.counterexample.empty()) {
    const auto id = svtlab::ParseCounterexample(o.counterexample);
    instances.push_back(svtlab::MakeCounterexample(id, o.m, o.eps).instance);
    if (id != svtlab::CounterexampleId::kAlg5TwoQuery) size_m = o.m;
  } else if (!o.family.empty()) {
    instances = svtlab::ExpandPatterns(config, svtlab::AdversarialFamily(o.len));
  } else {
    instances = ReadInstanceFile(o.instance_file);
  }

  svtlab::Rng rng(seed);
  std::vector<svtlab::AuditReport> reports;
  for (const auto& inst : instances) {
    svtlab::AuditReport r =
        o.method == "quadrature"
            ? svtlab::AuditQuadrature(config, inst, claim)
            : svtlab::AuditMonteCarlo(config, inst, o.samples, rng, claim);
    if (size_m) r.m = *size_m;
    reports.push_back(std::move(r));
  }

  Sink sink(o.out);
  sink.stream() << svtlab::AuditCsvHeader() << '\n';
  const svtlab::AuditReport* worst = nullptr;
  int violations = 0;
  bool unbounded = false;
  for (const auto& r : reports) {
    sink.stream() << svtlab::AuditCsvRow(r) << '\n';
    if (r.verdict == svtlab::Verdict::kUnbounded) unbounded = true;
    if (r.verdict == svtlab::Verdict::kUnbounded ||
        r.verdict == svtlab::Verdict::kViolatesBound) {
      ++violations;
    }
    if (!worst || std::fabs(r.log_ratio) > std::fabs(worst->log_ratio)) {
      worst = &r;
    }
  }
  sink.stream().flush();

  const char* verdict = unbounded        ? "Unbounded"
                        : violations > 0 ? "ViolatesBound"
                                         : "WithinBound";
  std::cerr << "audited " << reports.size() << " pattern(s) of "
            << svtlab::VariantName(config.variant) << " against eps "
            << svtlab::FormatDouble(claim) << ": " << verdict;
  if (worst) {
    std::cerr << ", worst |log-ratio| "
              << svtlab::FormatDouble(std::fabs(worst->log_ratio)) << " on "
              << worst->instance_id;
  }
  std::cerr << '\n';
  return violations > 0 ? kExitViolation : kExitOk;
}

svtlab::ItemHistogram LoadBenchData(const BenchOptions& o,
                                    std::uint64_t seed) {
  const int sources =
      !o.dataset.empty() + !o.histogram.empty() + !o.zipf.empty();
  if (sources != 1) {
    throw UsageError("give exactly one of --dataset, --histogram, --zipf");
  }
  if (!o.dataset.empty()) return svtlab::IngestTransactions(o.dataset);
  if (!o.histogram.empty()) return svtlab::ReadHistogramCsv(o.histogram);
  std::size_t items = 0;
  std::size_t records = 0;
  char tail = 0;
  if (std::sscanf(o.zipf.c_str(), "%zu:%zu%c", &items, &records, &tail) != 2) {
    throw UsageError("--zipf takes ITEMS:RECORDS, got '" + o.zipf + "'");
  }
  return svtlab::GenZipf(items, records, seed);
}

int RunBenchCommand(const BenchOptions& o, std::uint64_t seed) {
  std::vector<svtlab::BenchMethod> methods;
  for (const auto& m : o.methods) methods.push_back(svtlab::ParseMethod(m));
  const svtlab::ItemHistogram hist = LoadBenchData(o, seed);

  std::vector<svtlab::BenchResult> results;
  for (const auto& method : methods) {
    for (std::size_t c : o.cs) {
      svtlab::BenchPlan plan;
      plan.method = method;
      plan.c = c;
      plan.epsilon = o.eps;
      plan.trials = o.trials;
      plan.seed = seed;
      results.push_back(svtlab::RunBench(plan, hist));
    }
  }

  if (!o.out.empty()) {
    Sink trials(o.out);
    svtlab::WriteTrialsCsvHeader(trials.stream());
    for (const auto& r : results) svtlab::WriteTrialsCsvRows(trials.stream(), r);
  }
  Sink summary(o.summary);
  svtlab::WriteSummaryCsvHeader(summary.stream());
  for (const auto& r : results) svtlab::WriteSummaryCsvRow(summary.stream(), r);
  return kExitOk;
}

int RunGenZipf(const ZipfOptions& o, std::uint64_t seed) {
  const svtlab::ItemHistogram hist = svtlab::GenZipf(o.items, o.records, seed);
  Sink sink(o.out);
  svtlab::WriteHistogramCsv(sink.stream(), hist);
  return kExitOk;
}

std::string SixDigits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

int RunSplit(const SplitOptions& o) {
  const svtlab::BudgetSplit s = svtlab::OptimizeSplit(o.eps, o.c, o.monotonic);
  std::cout << SixDigits(s.eps1) << " / " << SixDigits(s.eps2) << '\n';
  return kExitOk;
}

int RunBounds(const BoundsOptions& o) {
  const svtlab::UtilityBounds b =
      svtlab::ComputeUtilityBounds(o.k, o.beta, o.eps);
  std::cout << "alpha_svt " << SixDigits(b.alpha_svt) << '\n'
            << "alpha_em " << SixDigits(b.alpha_em) << '\n';
  return kExitOk;
}

std::uint64_t SeedFromEnvironment() {
  const char* env = std::getenv("SVTLAB_SEED");
  if (!env || !*env) return 0;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0') {
    throw UsageError(std::string("SVTLAB_SEED is not an integer: ") + env);
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse vector technique audits and benchmarks", "svtlab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed", seed_flag,
                 "Random seed (default: $SVTLAB_SEED, else 0)");

  AuditOptions audit;
  CLI::App* audit_cmd =
      app.add_subcommand("audit", "Compare output probabilities on D and D'");
  audit_cmd->add_option("--variant", audit.variant, "alg1..alg7 or gptt")
      ->required();
  audit_cmd->add_option("--counterexample", audit.counterexample,
                        "appendixA1 | thm2 | appendixA2");
  audit_cmd->add_option("--family", audit.family, "adversarial");
  audit_cmd->add_option("--instance-file", audit.instance_file,
                        "JSON file with neighbouring instances");
  audit_cmd->add_option("--len", audit.len, "Family stream length")
      ->check(CLI::Range(1, 6));
  audit_cmd->add_option("--c", audit.c, "Cutoff")->check(CLI::PositiveNumber);
  audit_cmd->add_option("--m", audit.m, "Counterexample size")
      ->check(CLI::PositiveNumber);
  audit_cmd->add_option("--eps", audit.eps, "Total budget")
      ->check(CLI::PositiveNumber);
  audit_cmd->add_option("--split", audit.split, "eps1,eps2[,eps3]")
      ->delimiter(',');
  audit_cmd->add_flag("--monotonic", audit.monotonic,
                      "Monotonic calibration (alg7)");
  audit_cmd->add_option("--method", audit.method, "quadrature | montecarlo");
  audit_cmd->add_option("--samples", audit.samples, "Monte Carlo runs per side");
  audit_cmd->add_option("--claim", audit.claim,
                        "Claimed bound (default: the total budget)");
  audit_cmd->add_option("--out", audit.out, "CSV path (default stdout)");

  BenchOptions bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Top-c selection utility benchmark");
  bench_cmd->add_option("--dataset", bench.dataset, "Transaction file");
  bench_cmd->add_option("--histogram", bench.histogram, "item,count CSV");
  bench_cmd->add_option("--zipf", bench.zipf, "ITEMS:RECORDS");
  bench_cmd->add_option("--c", bench.cs, "Cutoffs, comma separated")
      ->delimiter(',')
      ->required()
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--eps", bench.eps, "Total budget")
      ->check(CLI::PositiveNumber);
  bench_cmd
      ->add_option("--methods", bench.methods,
                   "em, svt-dpbook, svt-s:R1:R2, svt-retr:R1:R2:KD")
      ->delimiter(',')
      ->required();
  bench_cmd->add_option("--trials", bench.trials, "Trials per cell")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", bench.out, "Per-trial CSV path");
  bench_cmd->add_option("--summary", bench.summary,
                        "Summary CSV path (default stdout)");

  ZipfOptions zipf;
  CLI::App* zipf_cmd =
      app.add_subcommand("gen-zipf", "Write a Zipf item histogram");
  zipf_cmd->add_option("--items", zipf.items, "Number of items")
      ->check(CLI::PositiveNumber);
  zipf_cmd->add_option("--records", zipf.records, "Number of records")
      ->check(CLI::PositiveNumber);
  zipf_cmd->add_option("--out", zipf.out, "CSV path (default stdout)");

  SplitOptions split;
  CLI::App* split_cmd =
      app.add_subcommand("split", "Variance-optimal eps1 / eps2");
  split_cmd->add_option("--eps", split.eps, "Selection budget")->required();
  split_cmd->add_option("--c", split.c, "Cutoff")->required();
  split_cmd->add_flag("--monotonic", split.monotonic, "Monotonic queries");

  BoundsOptions bounds;
  CLI::App* bounds_cmd =
      app.add_subcommand("bounds", "Accuracy radii of SVT and EM");
  bounds_cmd->add_option("--k", bounds.k, "Number of queries")->required();
  bounds_cmd->add_option("--beta", bounds.beta, "Failure probability")
      ->required();
  bounds_cmd->add_option("--eps", bounds.eps, "Budget")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const std::uint64_t seed =
        seed_flag ? *seed_flag : SeedFromEnvironment();
    std::cerr << "seed " << seed << '\n';
    if (*audit_cmd) return RunAudit(audit, seed);
    if (*bench_cmd) return RunBenchCommand(bench, seed);
    if (*zipf_cmd) return RunGenZipf(zipf, seed);
    if (*split_cmd) return RunSplit(split);
    if (*bounds_cmd) return RunBounds(bounds);
  } catch (const svtlab::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const svtlab::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const svtlab::UndefinedMetric& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
