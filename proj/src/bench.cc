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

#include "svtlab/bench.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "svtlab/errors.h"
#include "svtlab/exponential_mechanism.h"
#include "svtlab/query_set.h"
#include "svtlab/random.h"
#include "svtlab/svt.h"

namespace svtlab {

double ItemHistogram::Total() const {
  double t = 0.0;
  for (const Item& it : items) t += it.score;
  return t;
}

ItemHistogram IngestTransactions(std::istream& in) {
  ItemHistogram hist;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream tokens(line);
    std::unordered_set<std::string> seen;
    std::string id;
    while (tokens >> id) {
      if (!seen.insert(id).second) continue;
      auto [it, fresh] = index.emplace(id, hist.items.size());
      if (fresh) hist.items.push_back(Item{id, 0.0});
      hist.items[it->second].score += 1.0;
    }
  }
  if (in.bad()) throw DataError("error while reading transactions");
  if (hist.items.empty()) throw DataError("transaction corpus has no items");
  return hist;
}

ItemHistogram IngestTransactions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open transaction file " + path.string());
  return IngestTransactions(in);
}

namespace {

std::string Trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool ParseDouble(std::string_view text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace

ItemHistogram ReadHistogramCsv(std::istream& in) {
  ItemHistogram hist;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = Trim(line);
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw DataError("histogram line " + std::to_string(line_no) +
                      ": expected item,count");
    }
    std::string id = Trim(line.substr(0, comma));
    double count = 0.0;
    if (id.empty() || !ParseDouble(Trim(line.substr(comma + 1)), count) ||
        !std::isfinite(count) || count < 0.0) {
      throw DataError("histogram line " + std::to_string(line_no) +
                      ": bad item or count");
    }
    if (!ids.insert(id).second) {
      throw DataError("histogram repeats item '" + id + "'");
    }
    hist.items.push_back(Item{std::move(id), count});
  }
  if (hist.items.empty()) throw DataError("histogram has no items");
  return hist;
}

ItemHistogram ReadHistogramCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open histogram file " + path.string());
  return ReadHistogramCsv(in);
}

void WriteHistogramCsv(std::ostream& out, const ItemHistogram& hist) {
  out << "item,count\n";
  for (const Item& it : hist.items) {
    out << it.id << ',' << FormatDouble(it.score) << '\n';
  }
}

ItemHistogram GenZipf(std::size_t n_items, std::size_t n_records,
                      std::uint64_t seed) {
  if (n_items == 0 || n_records == 0) {
    throw InvalidArgument("zipf needs at least one item and one record");
  }
  std::vector<double> cumulative(n_items);
  double acc = 0.0;
  for (std::size_t i = 0; i < n_items; ++i) {
    acc += 1.0 / static_cast<double>(i + 1);
    cumulative[i] = acc;
  }
  std::vector<double> counts(n_items, 0.0);
  Rng rng(seed);
  for (std::size_t r = 0; r < n_records; ++r) {
    const double u = rng.Uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    counts[static_cast<std::size_t>(it - cumulative.begin())] += 1.0;
  }
  const std::size_t width =
      std::max<std::size_t>(4, std::to_string(n_items).size());
  ItemHistogram hist;
  hist.items.reserve(n_items);
  for (std::size_t i = 0; i < n_items; ++i) {
    std::string rank = std::to_string(i + 1);
    hist.items.push_back(
        Item{"item" + std::string(width - rank.size(), '0') + rank, counts[i]});
  }
  return hist;
}

TopC TrueTopC(const ItemHistogram& hist, std::size_t c) {
  if (c < 1 || c >= hist.size()) {
    throw InvalidCutoff("top-c needs 1 <= c < " + std::to_string(hist.size()) +
                        ", got c = " + std::to_string(c));
  }
  std::vector<std::size_t> order(hist.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&hist](std::size_t a, std::size_t b) {
    const Item& x = hist.items[a];
    const Item& y = hist.items[b];
    if (x.score != y.score) return x.score > y.score;
    return x.id < y.id;
  });
  TopC top;
  top.threshold =
      0.5 * (hist.items[order[c - 1]].score + hist.items[order[c]].score);
  order.resize(c);
  top.indices = std::move(order);
  return top;
}

double ScoreFnr(const std::vector<std::size_t>& selected,
                const std::vector<std::size_t>& top_c) {
  if (top_c.empty()) throw UndefinedMetric("FNR of an empty top-c set");
  const std::unordered_set<std::size_t> chosen(selected.begin(),
                                               selected.end());
  std::size_t missed = 0;
  for (std::size_t i : top_c) {
    if (!chosen.count(i)) ++missed;
  }
  return static_cast<double>(missed) / static_cast<double>(top_c.size());
}

namespace {

double SumScores(const std::vector<std::size_t>& idx,
                 const ItemHistogram& hist) {
  double s = 0.0;
  for (std::size_t i : idx) s += hist.items.at(i).score;
  return s;
}

}  // namespace

double ScoreSer(const std::vector<std::size_t>& selected,
                const std::vector<std::size_t>& top_c,
                const ItemHistogram& hist) {
  if (selected.empty()) throw UndefinedMetric("SER of an empty selection");
  const double top_sum = SumScores(top_c, hist);
  if (top_c.empty() || !(top_sum > 0.0)) {
    throw UndefinedMetric("SER needs a top-c set with positive score");
  }
  const double avg_sel =
      SumScores(selected, hist) / static_cast<double>(selected.size());
  return 1.0 - avg_sel / (top_sum / static_cast<double>(top_c.size()));
}

double ScoreSerCountMatched(const std::vector<std::size_t>& selected,
                            const std::vector<std::size_t>& top_c,
                            const ItemHistogram& hist) {
  const double top_sum = SumScores(top_c, hist);
  if (top_c.empty() || !(top_sum > 0.0)) {
    throw UndefinedMetric("SER needs a top-c set with positive score");
  }
  return 1.0 - SumScores(selected, hist) / top_sum;
}

double RatioTerm::Evaluate(std::size_t c) const {
  return coefficient * std::pow(static_cast<double>(c), power);
}

RatioTerm ParseRatioTerm(std::string_view token) {
  RatioTerm term;
  term.token = std::string(token);
  const auto bad = [&token]() {
    return InvalidArgument("bad budget ratio term '" + std::string(token) +
                           "' (expected a number, c, c23 or 2c23)");
  };
  const auto c_pos = token.find('c');
  if (c_pos == std::string_view::npos) {
    double v = 0.0;
    if (!ParseDouble(token, v) || !(v > 0.0) || !std::isfinite(v)) throw bad();
    term.coefficient = v;
    term.power = 0.0;
    return term;
  }
  double k = 1.0;
  if (c_pos > 0) {
    if (!ParseDouble(token.substr(0, c_pos), k) || !(k > 0.0) ||
        !std::isfinite(k)) {
      throw bad();
    }
  }
  const std::string_view suffix = token.substr(c_pos + 1);
  if (suffix.empty()) {
    term.coefficient = k;
    term.power = 1.0;
  } else if (suffix == "23") {
    term.coefficient = std::cbrt(k * k);
    term.power = 2.0 / 3.0;
  } else {
    throw bad();
  }
  return term;
}

std::string BenchMethod::Name() const {
  switch (kind) {
    case MethodKind::kEm: return "em";
    case MethodKind::kSvtDpBook: return "svt-dpbook";
    case MethodKind::kSvtS:
      return "svt-s:" + threshold_part.token + ":" + query_part.token;
    case MethodKind::kSvtReTr:
      return "svt-retr:" + threshold_part.token + ":" + query_part.token +
             ":" + FormatDouble(boost_sigmas) + "D";
  }
  return "unknown";
}

double BenchMethod::Ratio(std::size_t c) const {
  return query_part.Evaluate(c) / threshold_part.Evaluate(c);
}

BenchMethod ParseMethod(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const auto bad = [&spec]() {
    return InvalidArgument(
        "bad method '" + std::string(spec) +
        "' (expected em, svt-dpbook, svt-s:r1:r2 or svt-retr:r1:r2:kD)");
  };
  BenchMethod m;
  if (parts[0] == "em" && parts.size() == 1) {
    m.kind = MethodKind::kEm;
  } else if (parts[0] == "svt-dpbook" && parts.size() == 1) {
    m.kind = MethodKind::kSvtDpBook;
  } else if (parts[0] == "svt-s" && parts.size() == 3) {
    m.kind = MethodKind::kSvtS;
    m.threshold_part = ParseRatioTerm(parts[1]);
    m.query_part = ParseRatioTerm(parts[2]);
  } else if (parts[0] == "svt-retr" && parts.size() == 4) {
    m.kind = MethodKind::kSvtReTr;
    m.threshold_part = ParseRatioTerm(parts[1]);
    m.query_part = ParseRatioTerm(parts[2]);
    std::string_view boost = parts[3];
    if (boost.empty() || (boost.back() != 'D' && boost.back() != 'd')) {
      throw bad();
    }
    boost.remove_suffix(1);
    if (!ParseDouble(boost, m.boost_sigmas) || !(m.boost_sigmas >= 0.0) ||
        !std::isfinite(m.boost_sigmas)) {
      throw bad();
    }
  } else {
    throw bad();
  }
  return m;
}

namespace {

std::vector<std::size_t> Shuffled(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = rng.Below(i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

void MeanStd(const std::vector<double>& xs, double& mean, double& sd) {
  if (xs.empty()) {
    mean = sd = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  mean = std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
  if (xs.size() < 2) {
    sd = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::vector<std::size_t> SelectOnce(const BenchPlan& plan, const QuerySet& qs,
                                    double threshold, Rng& rng) {
  const BenchMethod& m = plan.method;
  std::vector<std::size_t> chosen;
  if (m.kind == MethodKind::kEm) {
    return EmSelectTopC(qs, plan.epsilon, plan.c, rng).chosen_indices;
  }
  if (m.kind == MethodKind::kSvtDpBook) {
    const SvtConfig config =
        SvtConfig::Fixed(Variant::kAlg2, plan.epsilon, plan.c, {threshold});
    const OutcomeVector out = RunSvt(config, qs, rng);
    for (std::size_t i = 0; i < out.answers.size(); ++i) {
      if (out.answers[i].positive()) chosen.push_back(i);
    }
    return chosen;
  }
  const SvtConfig config = SvtConfig::Standard(
      SplitByRatio(plan.epsilon, m.Ratio(plan.c)), plan.c, true, {threshold});
  if (m.kind == MethodKind::kSvtReTr) {
    return RunSvtRetraversal(config, qs, m.boost_sigmas, rng).chosen_indices;
  }
  const OutcomeVector out = RunSvt(config, qs, rng);
  for (std::size_t i = 0; i < out.answers.size(); ++i) {
    if (out.answers[i].positive()) chosen.push_back(i);
  }
  return chosen;
}

}  // namespace

BenchResult RunBench(const BenchPlan& plan, const ItemHistogram& hist) {
  if (!(plan.epsilon > 0.0) || !std::isfinite(plan.epsilon)) {
    throw InvalidArgument("bench epsilon must be finite and positive");
  }
  if (plan.trials == 0) throw InvalidArgument("bench needs at least 1 trial");
  const TopC top = TrueTopC(hist, plan.c);

  BenchResult result;
  result.plan = plan;
  std::vector<double> scores(hist.size());
  std::vector<double> fnrs;
  std::vector<double> sers;
  for (std::size_t t = 0; t < plan.trials; ++t) {
    Rng rng(MixSeed(plan.seed, t));
    const std::vector<std::size_t> perm = Shuffled(hist.size(), rng);
    for (std::size_t j = 0; j < perm.size(); ++j) {
      scores[j] = hist.items[perm[j]].score;
    }
    const QuerySet qs(scores, 1.0, true);
    std::vector<std::size_t> selected;
    for (std::size_t j : SelectOnce(plan, qs, top.threshold, rng)) {
      selected.push_back(perm[j]);
    }

    TrialResult tr;
    tr.trial = t;
    tr.selected_count = selected.size();
    tr.fnr = ScoreFnr(selected, top.indices);
    if (selected.empty()) {
      tr.ser = std::numeric_limits<double>::quiet_NaN();
      ++result.undefined_ser;
    } else {
      tr.ser = ScoreSerCountMatched(selected, top.indices, hist);
      sers.push_back(tr.ser);
    }
    fnrs.push_back(tr.fnr);
    result.trials.push_back(tr);
  }
  MeanStd(sers, result.mean_ser, result.std_ser);
  MeanStd(fnrs, result.mean_fnr, result.std_fnr);
  return result;
}

void WriteTrialsCsvHeader(std::ostream& out) {
  out << "method,c,epsilon,trial,selected_count,fnr,ser\n";
}

void WriteTrialsCsvRows(std::ostream& out, const BenchResult& result) {
  const std::string prefix = result.plan.method.Name() + "," +
                             std::to_string(result.plan.c) + "," +
                             FormatDouble(result.plan.epsilon) + ",";
  for (const TrialResult& t : result.trials) {
    out << prefix << t.trial << ',' << t.selected_count << ','
        << FormatDouble(t.fnr) << ',' << FormatDouble(t.ser) << '\n';
  }
}

void WriteSummaryCsvHeader(std::ostream& out) {
  out << "method,c,epsilon,mean_ser,std_ser,mean_fnr,std_fnr\n";
}

void WriteSummaryCsvRow(std::ostream& out, const BenchResult& result) {
  out << result.plan.method.Name() << ',' << result.plan.c << ','
      << FormatDouble(result.plan.epsilon) << ','
      << FormatDouble(result.mean_ser) << ',' << FormatDouble(result.std_ser)
      << ',' << FormatDouble(result.mean_fnr) << ','
      << FormatDouble(result.std_fnr) << '\n';
}

}  // namespace svtlab
