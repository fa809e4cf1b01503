#pragma once

// Monte-Carlo tests of scalar corpus statistics against the Bernoulli
// (reshuffle) null of a template text.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ssrlab/corpus.hpp"
#include "ssrlab/error.hpp"
#include "ssrlab/genmodels.hpp"
#include "ssrlab/parallel.hpp"
#include "ssrlab/random.hpp"
#include "ssrlab/stats.hpp"

namespace ssrlab {

struct TestResult {
  std::string statistic;
  double observed = 0.0;
  std::size_t replicates = 0;
  std::size_t n_ge = 0;  // replicates >= observed
  std::size_t n_le = 0;  // replicates <= observed
  double p = 1.0;
  bool floored = false;
};

// Two-sided p = 2 min(n_ge, n_le) / R, ties counted in both tails, floored
// at 1/R and capped at 1.
inline TestResult mc_pvalue(double observed, std::span<const double> replicates,
                            std::string statistic = {}) {
  require(!replicates.empty(), ErrorKind::input, "mc_pvalue: no replicates");
  TestResult r;
  r.statistic = std::move(statistic);
  r.observed = observed;
  r.replicates = replicates.size();
  for (double x : replicates) {
    if (x >= observed) ++r.n_ge;
    if (x <= observed) ++r.n_le;
  }
  const double R = static_cast<double>(r.replicates);
  const std::size_t tail = std::min(r.n_ge, r.n_le);
  r.floored = tail == 0;
  r.p = std::min(1.0, std::max(2.0 * static_cast<double>(tail) / R, 1.0 / R));
  return r;
}

// A list of named statistics evaluated together, so that statistics sharing
// a transition matrix only build it once.
struct StatisticSuite {
  std::vector<std::string> names;
  std::function<std::vector<double>(const Corpus&)> evaluate;
};

struct Statistic {
  std::string name;
  std::function<double(const Corpus&)> compute;
};

inline StatisticSuite make_suite(std::vector<Statistic> stats) {
  StatisticSuite suite;
  for (const auto& s : stats) suite.names.push_back(s.name);
  suite.evaluate = [stats = std::move(stats)](const Corpus& c) {
    std::vector<double> out;
    out.reserve(stats.size());
    for (const auto& s : stats) out.push_back(s.compute(c));
    return out;
  };
  return suite;
}

// skew and cos of the top-W_max transition matrix.
inline StatisticSuite transition_statistics(std::size_t w_max = kDefaultWmax) {
  return {{"skew", "cos"}, [w_max](const Corpus& c) {
            const auto a = transition_matrix(c, w_max);
            return std::vector<double>{skew(a), cos_measure(a)};
          }};
}

// Bernoulli replicate statistics of one template, cached per (R, seed).
class NullSampler {
 public:
  NullSampler(const Corpus& templ, StatisticSuite suite, unsigned threads = 0)
      : templ_(templ), suite_(std::move(suite)), threads_(threads) {}

  const StatisticSuite& suite() const noexcept { return suite_; }

  // values[s][r]: statistic s on replicate r.
  const std::vector<std::vector<double>>& replicates(std::size_t count,
                                                     std::uint64_t seed) {
    require(count >= 1, ErrorKind::input, "null sampler: need at least one replicate");
    auto key = std::pair{count, seed};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    std::vector<std::vector<double>> per_replicate(count);
    parallel_for(
        count,
        [&](std::size_t r) {
          const auto shuffled = bernoulli_shuffle(templ_, derive_seed(seed, "bernoulli-null", r));
          per_replicate[r] = suite_.evaluate(shuffled);
        },
        threads_);

    std::vector<std::vector<double>> values(suite_.names.size(),
                                            std::vector<double>(count));
    for (std::size_t r = 0; r < count; ++r)
      for (std::size_t s = 0; s < values.size(); ++s) values[s][r] = per_replicate[r][s];
    return cache_.emplace(key, std::move(values)).first->second;
  }

  std::vector<TestResult> test(const std::vector<double>& observed, std::size_t count,
                               std::uint64_t seed) {
    require(observed.size() == suite_.names.size(), ErrorKind::input,
            "null sampler: statistic count mismatch");
    const auto& values = replicates(count, seed);
    std::vector<TestResult> out;
    for (std::size_t s = 0; s < observed.size(); ++s)
      out.push_back(mc_pvalue(observed[s], values[s], suite_.names[s]));
    return out;
  }

 private:
  const Corpus& templ_;
  StatisticSuite suite_;
  unsigned threads_;
  std::map<std::pair<std::size_t, std::uint64_t>, std::vector<std::vector<double>>> cache_;
};

struct ModelSpec {
  std::string name;
  std::string params;  // free-form description for reports
  std::function<Corpus(std::uint64_t seed)> generate;
  std::string seed_key{};  // defaults to "name|params"

  std::string stream() const { return seed_key.empty() ? name + "|" + params : seed_key; }
};

// Statistics of `realizations` independent corpora of one model.
struct ModelEvaluation {
  std::string model;
  std::string params;
  std::vector<std::vector<double>> values;  // [realization][statistic]
  std::optional<std::string> error;
};

inline std::uint64_t realization_seed(std::uint64_t master, const ModelSpec& model,
                                      std::size_t k) {
  return derive_seed(master, "model:" + model.stream(), k);
}

inline std::vector<ModelEvaluation> evaluate_models(const std::vector<ModelSpec>& models,
                                                    const StatisticSuite& suite,
                                                    std::size_t realizations,
                                                    std::uint64_t seed,
                                                    unsigned threads = 0) {
  require(realizations >= 1, ErrorKind::input, "need at least one realization");
  std::vector<ModelEvaluation> evals(models.size());
  std::vector<std::vector<std::optional<std::string>>> errors(
      models.size(), std::vector<std::optional<std::string>>(realizations));
  for (std::size_t m = 0; m < models.size(); ++m) {
    evals[m].model = models[m].name;
    evals[m].params = models[m].params;
    evals[m].values.resize(realizations);
  }
  parallel_for(
      models.size() * realizations,
      [&](std::size_t unit) {
        const std::size_t m = unit / realizations, k = unit % realizations;
        try {
          const auto corpus =
              models[m].generate(realization_seed(seed, models[m], k));
          evals[m].values[k] = suite.evaluate(corpus);
        } catch (const Error& e) {
          errors[m][k] = e.what();
        }
      },
      threads);
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (auto& e : errors[m]) {
      if (e) {
        evals[m].error = *e;
        evals[m].values.clear();
        break;
      }
    }
  }
  return evals;
}

struct TableCell {
  std::vector<TestResult> results;  // one per realization
  double mean_p = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::string> error;
};

struct TableRow {
  std::string model;
  std::string params;
  std::vector<TableCell> cells;  // one per statistic
};

struct TableReport {
  std::vector<std::string> statistics;
  std::size_t replicates = 0;
  std::size_t realizations = 0;
  std::uint64_t seed = 0;
  std::vector<TableRow> rows;

  const TableRow* row(std::string_view model) const {
    for (const auto& r : rows)
      if (r.model == model) return &r;
    return nullptr;
  }
};

struct TableOptions {
  std::size_t replicates = 1000;
  std::size_t realizations = 5;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

// Rows: the template itself ("original"), a Bernoulli self-test
// ("bernoulli"), then every model. Each cell holds the p-values of the
// realizations against one shared null sample and their mean.
inline TableReport run_table(const Corpus& templ, const std::vector<ModelSpec>& models,
                             NullSampler& null, const TableOptions& opt) {
  require(opt.replicates >= 100, ErrorKind::input, "run_table: need R >= 100");
  require(opt.realizations >= 1, ErrorKind::input, "run_table: need realizations >= 1");
  const auto& suite = null.suite();
  const std::uint64_t null_seed = derive_seed(opt.seed, "null");

  TableReport report;
  report.statistics = suite.names;
  report.replicates = opt.replicates;
  report.realizations = opt.realizations;
  report.seed = opt.seed;

  auto make_row = [&](const ModelEvaluation& eval) {
    TableRow row{eval.model, eval.params, std::vector<TableCell>(suite.names.size())};
    for (std::size_t s = 0; s < suite.names.size(); ++s) {
      TableCell& cell = row.cells[s];
      if (eval.error) {
        cell.error = eval.error;
        continue;
      }
      const std::vector<double>* reps = nullptr;
      try {
        reps = &null.replicates(opt.replicates, null_seed)[s];
      } catch (const Error& e) {
        cell.error = std::string("null sample: ") + e.what();
        continue;
      }
      double sum = 0;
      for (const auto& values : eval.values) {
        cell.results.push_back(mc_pvalue(values[s], *reps, suite.names[s]));
        sum += cell.results.back().p;
      }
      cell.mean_p = sum / static_cast<double>(cell.results.size());
    }
    return row;
  };

  ModelEvaluation original{"original", "", {}, std::nullopt};
  try {
    original.values.push_back(suite.evaluate(templ));
  } catch (const Error& e) {
    original.error = e.what();
  }
  report.rows.push_back(make_row(original));

  std::vector<ModelSpec> all;
  all.push_back({"bernoulli", "", [&templ](std::uint64_t s) { return bernoulli_shuffle(templ, s); }});
  all.insert(all.end(), models.begin(), models.end());
  for (const auto& eval : evaluate_models(all, suite, opt.realizations, opt.seed, opt.threads))
    report.rows.push_back(make_row(eval));
  return report;
}

}  // namespace ssrlab
