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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svtlab/audit.h"
#include "svtlab/bench.h"
#include "svtlab/budget.h"
#include "svtlab/errors.h"
#include "svtlab/exponential_mechanism.h"
#include "svtlab/query_set.h"
#include "svtlab/random.h"
#include "svtlab/svt.h"

namespace py = pybind11;
using namespace svtlab;

namespace {

std::vector<std::pair<std::string, double>> AnswersToPy(
    const std::vector<Answer>& answers) {
  std::vector<std::pair<std::string, double>> out;
  for (const Answer& a : answers) {
    switch (a.kind) {
      case AnswerKind::kBelow: out.emplace_back("B", 0.0); break;
      case AnswerKind::kAbove: out.emplace_back("A", 0.0); break;
      case AnswerKind::kNumeric: out.emplace_back("N", a.value); break;
    }
  }
  return out;
}

std::vector<Answer> ParsePattern(const std::vector<py::object>& items) {
  std::vector<Answer> out;
  for (const py::object& item : items) {
    if (py::isinstance<py::str>(item)) {
      const std::string s = item.cast<std::string>();
      if (s == "B") {
        out.push_back(Answer::Below());
      } else if (s == "A") {
        out.push_back(Answer::Above());
      } else {
        throw InvalidArgument("pattern entries are 'B', 'A' or a number");
      }
    } else {
      out.push_back(Answer::Numeric(item.cast<double>()));
    }
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_svtlab, m) {
  m.doc() = "Sparse Vector Technique variants, privacy auditing and benchmarks";

  py::register_exception<InvalidArgument>(m, "InvalidArgument",
                                          PyExc_ValueError);
  py::register_exception<UndefinedMetric>(m, "UndefinedMetric",
                                          PyExc_ArithmeticError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<SessionClosed>(m, "SessionClosed",
                                        PyExc_RuntimeError);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed") = 0)
      .def("uniform", &Rng::Uniform)
      .def("below", &Rng::Below, py::arg("bound"));

  py::enum_<Variant>(m, "Variant")
      .value("ALG1", Variant::kAlg1)
      .value("ALG2", Variant::kAlg2)
      .value("ALG3", Variant::kAlg3)
      .value("ALG4", Variant::kAlg4)
      .value("ALG5", Variant::kAlg5)
      .value("ALG6", Variant::kAlg6)
      .value("ALG7", Variant::kAlg7);
  m.def(
      "parse_variant",
      [](const std::string& name) { return ParseVariant(name); },
      py::arg("name"));

  py::class_<BudgetSplit>(m, "BudgetSplit")
      .def(py::init([](double eps1, double eps2, double eps3) {
             return MakeSplit(eps1, eps2, eps3, eps1 + eps2 + eps3);
           }),
           py::arg("eps1"), py::arg("eps2"), py::arg("eps3") = 0.0)
      .def_readonly("eps1", &BudgetSplit::eps1)
      .def_readonly("eps2", &BudgetSplit::eps2)
      .def_readonly("eps3", &BudgetSplit::eps3)
      .def("total", &BudgetSplit::Total)
      .def("__repr__", [](const BudgetSplit& s) {
        return "BudgetSplit(" + std::to_string(s.eps1) + ", " +
               std::to_string(s.eps2) + ", " + std::to_string(s.eps3) + ")";
      });
  m.def("split_by_ratio", &SplitByRatio, py::arg("epsilon"), py::arg("ratio"));
  m.def("optimize_split", &OptimizeSplit, py::arg("epsilon"), py::arg("c"),
        py::arg("monotonic") = false);
  m.def("comparison_variance", &ComparisonVariance, py::arg("eps1"),
        py::arg("eps2"), py::arg("c"), py::arg("delta") = 1.0,
        py::arg("monotonic") = false);

  py::class_<SvtConfig>(m, "SvtConfig")
      .def_static("fixed", &SvtConfig::Fixed, py::arg("variant"),
                  py::arg("epsilon"), py::arg("cutoff"),
                  py::arg("thresholds") = std::vector<double>{0.0})
      .def_static("standard", &SvtConfig::Standard, py::arg("split"),
                  py::arg("cutoff"), py::arg("monotonic") = false,
                  py::arg("thresholds") = std::vector<double>{0.0})
      .def_static("gptt", &SvtConfig::Gptt, py::arg("eps1"), py::arg("eps2"),
                  py::arg("thresholds") = std::vector<double>{0.0})
      .def_readonly("variant", &SvtConfig::variant)
      .def_readonly("epsilon", &SvtConfig::epsilon)
      .def_readonly("cutoff", &SvtConfig::cutoff)
      .def_readonly("thresholds", &SvtConfig::thresholds)
      .def("resolved_split",
           [](const SvtConfig& c) { return ResolvedSplit(c); })
      .def(
          "noise_scales",
          [](const SvtConfig& c, double delta) {
            const NoiseScales s = ComputeNoiseScales(c, delta);
            py::dict d;
            d["threshold"] = s.threshold;
            d["query"] = s.query;
            d["numeric"] = s.numeric;
            d["redraw"] = s.redraw;
            return d;
          },
          py::arg("delta") = 1.0);

  m.def(
      "run_svt",
      [](const SvtConfig& config, std::vector<double> scores,
         double sensitivity, bool monotonic, Rng& rng) {
        const OutcomeVector out = RunSvt(
            config, QuerySet(std::move(scores), sensitivity, monotonic), rng);
        return py::make_tuple(AnswersToPy(out.answers), out.abort_index);
      },
      py::arg("config"), py::arg("scores"), py::arg("sensitivity") = 1.0,
      py::arg("monotonic") = false, py::arg("rng"),
      "Returns ([(kind, value), ...], abort_index or None).");

  m.def(
      "run_retraversal",
      [](const SvtConfig& config, std::vector<double> scores,
         double sensitivity, double boost_sigmas, Rng& rng) {
        const RetraversalResult r = RunSvtRetraversal(
            config, QuerySet(std::move(scores), sensitivity, true),
            boost_sigmas, rng);
        return py::make_tuple(r.chosen_indices, r.passes, r.hit_pass_limit);
      },
      py::arg("config"), py::arg("scores"), py::arg("sensitivity") = 1.0,
      py::arg("boost_sigmas"), py::arg("rng"),
      "Returns (chosen indices, passes, hit_pass_limit).");

  m.def(
      "em_select_top_c",
      [](std::vector<double> scores, double sensitivity, bool monotonic,
         double epsilon, std::size_t c, Rng& rng) {
        return EmSelectTopC(QuerySet(std::move(scores), sensitivity, monotonic),
                            epsilon, c, rng)
            .chosen_indices;
      },
      py::arg("scores"), py::arg("sensitivity") = 1.0,
      py::arg("monotonic") = false, py::arg("epsilon"), py::arg("c"),
      py::arg("rng"));
  m.def(
      "em_probabilities",
      [](std::vector<double> scores, double sensitivity, bool monotonic,
         double epsilon) {
        return EmProbabilities(
            QuerySet(std::move(scores), sensitivity, monotonic), epsilon);
      },
      py::arg("scores"), py::arg("sensitivity") = 1.0,
      py::arg("monotonic") = false, py::arg("epsilon"));
  m.def(
      "utility_bounds",
      [](int k, double beta, double epsilon) {
        const UtilityBounds b = ComputeUtilityBounds(k, beta, epsilon);
        return py::make_tuple(b.alpha_svt, b.alpha_em);
      },
      py::arg("k"), py::arg("beta"), py::arg("epsilon"),
      "Returns (alpha_svt, alpha_em).");

  py::enum_<Verdict>(m, "Verdict")
      .value("WITHIN_BOUND", Verdict::kWithinBound)
      .value("VIOLATES_BOUND", Verdict::kViolatesBound)
      .value("UNBOUNDED", Verdict::kUnbounded)
      .value("NO_CLAIM", Verdict::kNoClaim);

  py::class_<NeighborInstance>(m, "NeighborInstance")
      .def(py::init([](std::vector<double> d, std::vector<double> d_prime,
                       std::vector<py::object> pattern, double delta,
                       std::vector<double> thresholds, std::string id) {
             NeighborInstance inst;
             inst.id = std::move(id);
             inst.scores_d = std::move(d);
             inst.scores_d_prime = std::move(d_prime);
             inst.delta = delta;
             inst.thresholds = std::move(thresholds);
             inst.pattern = ParsePattern(pattern);
             ValidateInstance(inst);
             return inst;
           }),
           py::arg("scores_d"), py::arg("scores_d_prime"),
           py::arg("pattern") = std::vector<py::object>{},
           py::arg("delta") = 1.0,
           py::arg("thresholds") = std::vector<double>{0.0},
           py::arg("id") = "")
      .def_readonly("id", &NeighborInstance::id)
      .def_readonly("scores_d", &NeighborInstance::scores_d)
      .def_readonly("scores_d_prime", &NeighborInstance::scores_d_prime)
      .def_property_readonly("pattern", [](const NeighborInstance& i) {
        return PatternString(i.pattern);
      });

  py::class_<AuditReport>(m, "AuditReport")
      .def_readonly("variant", &AuditReport::variant)
      .def_readonly("instance_id", &AuditReport::instance_id)
      .def_readonly("log_prob_d", &AuditReport::log_prob_d)
      .def_readonly("log_prob_d_prime", &AuditReport::log_prob_d_prime)
      .def_readonly("log_ratio", &AuditReport::log_ratio)
      .def_readonly("ci_halfwidth", &AuditReport::ci_halfwidth)
      .def_readonly("claimed_bound", &AuditReport::claimed_bound)
      .def_readonly("verdict", &AuditReport::verdict)
      .def_readonly("pattern", &AuditReport::pattern)
      .def("csv_row", [](const AuditReport& r) { return AuditCsvRow(r); });

  m.def("audit_quadrature", &AuditQuadrature, py::arg("config"),
        py::arg("instance"), py::arg("claimed_bound") = std::nullopt);
  m.def("audit_montecarlo", &AuditMonteCarlo, py::arg("config"),
        py::arg("instance"), py::arg("samples"), py::arg("rng"),
        py::arg("claimed_bound") = std::nullopt);
  m.def(
      "make_counterexample",
      [](const std::string& name, std::size_t m, double epsilon) {
        const Counterexample cx =
            MakeCounterexample(ParseCounterexample(name), m, epsilon);
        return py::make_tuple(cx.config, cx.instance, cx.expected_log_ratio,
                              cx.lower_bound);
      },
      py::arg("name"), py::arg("m") = 1, py::arg("epsilon") = 1.0,
      "Returns (config, instance, expected_log_ratio, is_lower_bound).");
  m.def("adversarial_family", &AdversarialFamily, py::arg("max_length"),
        py::arg("delta") = 1.0);
  m.def("expand_patterns", &ExpandPatterns, py::arg("config"),
        py::arg("instances"));
  m.def(
      "verify_dp_bound",
      [](const SvtConfig& config, const std::vector<NeighborInstance>& insts,
         double eps_claim) {
        const BoundSummary s = VerifyDpBound(config, insts, eps_claim);
        return py::make_tuple(s.verdict, s.worst, s.audited, s.violations);
      },
      py::arg("config"), py::arg("instances"), py::arg("eps_claim"),
      "Returns (verdict, worst report, audited, violations).");

  py::class_<ItemHistogram>(m, "ItemHistogram")
      .def("__len__", &ItemHistogram::size)
      .def("total", &ItemHistogram::Total)
      .def_property_readonly("items", [](const ItemHistogram& h) {
        std::vector<std::pair<std::string, double>> out;
        for (const Item& i : h.items) out.emplace_back(i.id, i.score);
        return out;
      });
  m.def("gen_zipf", &GenZipf, py::arg("n_items"), py::arg("n_records"),
        py::arg("seed"));
  m.def(
      "read_histogram_csv",
      [](const std::string& path) {
        return ReadHistogramCsv(std::filesystem::path(path));
      },
      py::arg("path"));
  m.def(
      "ingest_transactions",
      [](const std::string& path) {
        return IngestTransactions(std::filesystem::path(path));
      },
      py::arg("path"));
  m.def(
      "run_bench",
      [](const std::string& method, std::size_t c, double epsilon,
         std::size_t trials, std::uint64_t seed, const ItemHistogram& hist) {
        BenchPlan plan;
        plan.method = ParseMethod(method);
        plan.c = c;
        plan.epsilon = epsilon;
        plan.trials = trials;
        plan.seed = seed;
        const BenchResult r = RunBench(plan, hist);
        py::dict d;
        d["method"] = plan.method.Name();
        d["mean_ser"] = r.mean_ser;
        d["std_ser"] = r.std_ser;
        d["mean_fnr"] = r.mean_fnr;
        d["std_fnr"] = r.std_fnr;
        d["undefined_ser"] = r.undefined_ser;
        std::vector<double> ser;
        for (const TrialResult& t : r.trials) ser.push_back(t.ser);
        d["ser"] = ser;
        return d;
      },
      py::arg("method"), py::arg("c"), py::arg("epsilon"),
      py::arg("trials"), py::arg("seed"), py::arg("histogram"));
}
