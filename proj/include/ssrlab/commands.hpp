#pragma once

// Command implementations behind the `ssrlab` CLI. Each command is a pure
// function of its RunConfig: identical inputs and seed give byte-identical
// files.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssrlab/corpus.hpp"
#include "ssrlab/error.hpp"
#include "ssrlab/genmodels.hpp"
#include "ssrlab/grammar.hpp"
#include "ssrlab/hyptest.hpp"
#include "ssrlab/io.hpp"
#include "ssrlab/ssr.hpp"
#include "ssrlab/stats.hpp"

namespace ssrlab {

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::vector<std::filesystem::path> inputs;
  std::string model;
  std::uint32_t labels = 5;           // --ng
  double neutral_prob = 0.1;          // --pn
  std::uint32_t initial_words = 10;   // --w0
  std::uint32_t initial_weight = 1;   // --k0
  std::uint32_t alphabet = 30;        // --alphabet
  std::size_t w_max = kDefaultWmax;   // --wmax
  std::size_t replicates = 1000;      // --replicates
  std::size_t realizations = 5;       // --realizations
  std::uint64_t seed = 1;             // --seed
  std::filesystem::path out = "out";  // --out
  unsigned threads = 0;               // --threads, 0 = all cores
};

inline const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"ssr", "gossr", "bernoulli", "simon",
                                              "typewriter"};
  return names;
}

inline void validate(const RunConfig& cfg) {
  require(cfg.labels >= 1, ErrorKind::input, "--ng must be >= 1");
  require(cfg.neutral_prob >= 0.0 && cfg.neutral_prob <= 1.0, ErrorKind::input,
          "--pn must lie in [0, 1]");
  require(cfg.initial_words >= 1, ErrorKind::input, "--w0 must be >= 1");
  require(cfg.initial_weight >= 1, ErrorKind::input, "--k0 must be >= 1");
  require(cfg.alphabet >= 1 && cfg.alphabet <= kTypewriterKeys.size(), ErrorKind::input,
          "--alphabet must lie in 1..36");
  require(cfg.w_max >= 1, ErrorKind::input, "--wmax must be >= 1");
  require(cfg.replicates >= 1, ErrorKind::input, "--replicates must be >= 1");
  require(cfg.realizations >= 1, ErrorKind::input, "--realizations must be >= 1");
}

inline Provenance provenance(const RunConfig& cfg, std::vector<std::pair<std::string, std::string>> params = {}) {
  return {cfg.command, cfg.seed, std::move(params)};
}

inline std::string corpus_id(const std::filesystem::path& path) {
  std::string stem = path.filename().string();
  for (const char* suffix : {".corpus.txt", ".txt"}) {
    const std::string s = suffix;
    if (stem.size() > s.size() && stem.ends_with(s)) return stem.substr(0, stem.size() - s.size());
  }
  return stem;
}

// ---------------------------------------------------------------------------
// model construction

struct ModelParams {
  std::uint32_t labels = 5;
  double neutral_prob = 0.1;
  std::uint32_t initial_words = 10;
  std::uint32_t initial_weight = 1;
  std::uint32_t alphabet = 30;
};

inline ModelParams model_params(const RunConfig& cfg) {
  return {cfg.labels, cfg.neutral_prob, cfg.initial_words, cfg.initial_weight, cfg.alphabet};
}

inline std::string describe(const std::string& model, const ModelParams& p) {
  if (model == "gossr")
    return "N_g=" + std::to_string(p.labels) + ",p_n=" + format_double(p.neutral_prob);
  if (model == "simon")
    return "W_0=" + std::to_string(p.initial_words) + ",k_0=" + std::to_string(p.initial_weight);
  if (model == "typewriter") return "V=" + std::to_string(p.alphabet);
  return "";
}

// `templ` must outlive the returned spec.
inline ModelSpec make_model(const std::string& model, const Corpus& templ, const ModelParams& p) {
  const auto words = static_cast<std::uint32_t>(templ.lexicon.size());
  const std::size_t tokens = templ.token_count();
  const auto lengths = templ.sentence_lengths();

  ModelSpec spec{model, describe(model, p), {}};
  if (model == "ssr") {
    spec.generate = [words, lengths](std::uint64_t seed) {
      return ssr_corpus({words, seed}, lengths);
    };
  } else if (model == "gossr") {
    validate(GrammarConfig{p.labels, p.neutral_prob, 0});
    spec.generate = [&templ, p](std::uint64_t seed) {
      return gossr_text(templ, {p.labels, p.neutral_prob, seed});
    };
  } else if (model == "bernoulli") {
    spec.generate = [&templ](std::uint64_t seed) { return bernoulli_shuffle(templ, seed); };
  } else if (model == "simon") {
    validate(SimonConfig{words, tokens, p.initial_words, p.initial_weight, 0});
    spec.generate = [words, tokens, lengths, p](std::uint64_t seed) {
      return simon_generate({words, tokens, p.initial_words, p.initial_weight, seed}, lengths);
    };
  } else if (model == "typewriter") {
    validate(TypewriterConfig{p.alphabet, tokens, words, 0});
    spec.generate = [words, tokens, lengths, p](std::uint64_t seed) {
      return typewriter_generate({p.alphabet, tokens, words, seed}, lengths);
    };
  } else {
    throw Error(ErrorKind::input, "unknown model '" + model +
                                      "' (expected ssr, gossr, bernoulli, simon or typewriter)");
  }
  return spec;
}

// ---------------------------------------------------------------------------
// ingest

inline json cmd_ingest(const RunConfig& cfg) {
  validate(cfg);
  require(cfg.inputs.size() == 1, ErrorKind::input, "ingest takes exactly one input file");
  const auto& path = cfg.inputs.front();
  const Corpus corpus = ingest_text(read_raw_text(path));
  const auto id = corpus_id(path);
  const auto prov = provenance(cfg, {{"input", path.filename().string()}});

  const auto corpus_path = cfg.out / (id + ".corpus.txt");
  const auto lexicon_path = cfg.out / (id + ".lexicon.csv");
  const auto rf_path = cfg.out / (id + ".rankfreq.csv");
  const auto rf = rank_frequency(corpus);
  write_file(corpus_path, format_corpus(corpus, prov));
  write_file(lexicon_path, format_lexicon(corpus.lexicon, prov));
  write_file(rf_path, format_rank_frequency(rf, prov));

  json summary{{"command", "ingest"},
               {"corpus_id", id},
               {"W", corpus.lexicon.size()},
               {"N", corpus.token_count()},
               {"sentences", corpus.sentences.size()}};
  if (corpus.lexicon.size() >= 2) {
    const auto r_max = static_cast<std::uint32_t>(std::min<std::size_t>(100, rf.size()));
    summary["zipf_alpha_1_" + std::to_string(r_max)] = fit_zipf(rf, 1, r_max).alpha;
  }
  summary["files"] = json::array({corpus_path.string(), lexicon_path.string(), rf_path.string()});
  return summary;
}

// ---------------------------------------------------------------------------
// generate

inline json cmd_generate(const RunConfig& cfg) {
  validate(cfg);
  require(cfg.inputs.size() == 1, ErrorKind::input,
          "generate takes exactly one template corpus file");
  require(!cfg.model.empty(), ErrorKind::input, "generate needs --model");
  const Corpus templ = read_corpus(cfg.inputs.front());
  const ModelParams params = model_params(cfg);
  const ModelSpec spec = make_model(cfg.model, templ, params);

  json sidecar{{"tool", "ssrlab"},
               {"version", kVersion},
               {"model", cfg.model},
               {"template", cfg.inputs.front().filename().string()},
               {"seed", cfg.seed},
               {"W", templ.lexicon.size()},
               {"N", templ.token_count()},
               {"sentences", templ.sentences.size()}};
  std::vector<std::pair<std::string, std::string>> prov_params{{"model", cfg.model}};
  if (cfg.model == "gossr") {
    sidecar["N_g"] = params.labels;
    sidecar["p_n"] = params.neutral_prob;
  } else if (cfg.model == "simon") {
    sidecar["W_0"] = params.initial_words;
    sidecar["k_0"] = params.initial_weight;
  } else if (cfg.model == "typewriter") {
    sidecar["V"] = params.alphabet;
  }
  if (!spec.params.empty()) prov_params.emplace_back("params", spec.params);
  const auto prov = provenance(cfg, prov_params);

  const Corpus corpus = spec.generate(cfg.seed);
  const auto stem = cfg.out / cfg.model;
  const auto corpus_path = stem.string() + ".corpus.txt";
  const auto lexicon_path = stem.string() + ".lexicon.csv";
  const auto sidecar_path = stem.string() + ".params.json";
  write_file(corpus_path, format_corpus(corpus, prov));
  write_file(lexicon_path, format_lexicon(corpus.lexicon, prov));
  std::vector<std::string> files{corpus_path, lexicon_path, sidecar_path};
  if (cfg.model == "gossr") {
    GrammarConfig label_cfg{params.labels, params.neutral_prob,
                            derive_seed(cfg.seed, "grammar-labels")};
    const auto labels_path = stem.string() + ".labels.csv";
    write_file(labels_path,
               format_labels(assign_labels(static_cast<std::uint32_t>(templ.lexicon.size()),
                                           label_cfg),
                             prov));
    files.push_back(labels_path);
  }
  write_file(sidecar_path, sidecar.dump(2) + "\n");

  return {{"command", "generate"},
          {"model", cfg.model},
          {"W", corpus.lexicon.size()},
          {"N", corpus.token_count()},
          {"sentences", corpus.sentences.size()},
          {"files", files}};
}

// ---------------------------------------------------------------------------
// analyze

inline json stat_record(const std::string& name, double value, std::size_t w_max,
                        const std::string& id) {
  return {{"statistic", name}, {"value", value}, {"W_max", w_max}, {"corpus_id", id}};
}

// Statistics of one corpus file; with a second file, also the rank-increment
// distances from the first to the second.
inline json cmd_analyze(const RunConfig& cfg) {
  validate(cfg);
  require(cfg.inputs.size() == 1 || cfg.inputs.size() == 2, ErrorKind::input,
          "analyze takes one corpus file, or two to compare");
  const auto& path = cfg.inputs.front();
  const auto id = corpus_id(path);
  const Corpus corpus = read_corpus(path);
  const auto tc = count_transitions(corpus, cfg.w_max);
  const auto a = normalize(tc);
  const auto rf = rank_frequency(corpus);

  json records = json::array();
  records.push_back(stat_record("skew", skew(a), cfg.w_max, id));
  records.push_back(stat_record("cos", cos_measure(a), cfg.w_max, id));
  if (rf.size() >= 2) {
    const auto r_max = static_cast<std::uint32_t>(std::min<std::size_t>(100, rf.size()));
    records.push_back(stat_record("zipf_alpha", fit_zipf(rf, 1, r_max).alpha, cfg.w_max, id));
  }
  if (cfg.inputs.size() == 2) {
    const Corpus other = read_corpus(cfg.inputs[1]);
    const auto other_id = corpus_id(cfg.inputs[1]);
    const auto d1 = rank_increments(corpus), d2 = rank_increments(other);
    for (auto [name, kind] : {std::pair{"rank_increment_ks", Distance::ks},
                              std::pair{"rank_increment_l1", Distance::l1},
                              std::pair{"rank_increment_kl", Distance::kl}}) {
      auto rec = stat_record(name, dist_distance(d1, d2, kind), cfg.w_max, id);
      rec["reference_id"] = other_id;
      records.push_back(rec);
    }
  }

  const auto prov = provenance(cfg, {{"input", path.filename().string()},
                                     {"W_max", std::to_string(cfg.w_max)}});
  const auto stats_path = cfg.out / (id + ".stats.json");
  const auto counts_path = cfg.out / (id + ".transitions.csv");
  const auto marginals_path = cfg.out / (id + ".marginals.csv");
  write_file(stats_path, json{{"provenance", prov.line()}, {"records", records}}.dump(2) + "\n");
  write_file(counts_path, format_transition_counts(tc, prov));
  write_file(marginals_path, format_marginals(tc, prov));
  return {{"command", "analyze"},
          {"records", records},
          {"files", json::array({stats_path.string(), counts_path.string(), marginals_path.string()})}};
}

// ---------------------------------------------------------------------------
// test

inline json to_json(const TestResult& r) {
  return {{"statistic", r.statistic}, {"t_obs", r.observed}, {"R", r.replicates},
          {"n_ge", r.n_ge},           {"n_le", r.n_le},      {"p", r.p},
          {"floored", r.floored}};
}

// Tests a corpus (second input, or the template itself) against R Bernoulli
// reshuffles of the template.
inline json cmd_test(const RunConfig& cfg) {
  validate(cfg);
  require(cfg.inputs.size() == 1 || cfg.inputs.size() == 2, ErrorKind::input,
          "test takes a template corpus file and optionally a corpus to test");
  const Corpus templ = read_corpus(cfg.inputs.front());
  const auto& observed_path = cfg.inputs.back();
  const Corpus observed = cfg.inputs.size() == 2 ? read_corpus(observed_path) : templ;

  NullSampler null(templ, transition_statistics(cfg.w_max), cfg.threads);
  const auto results = null.test(null.suite().evaluate(observed), cfg.replicates,
                                 derive_seed(cfg.seed, "null"));
  json out = json::array();
  for (const auto& r : results) out.push_back(to_json(r));

  const auto prov = provenance(cfg, {{"template", cfg.inputs.front().filename().string()},
                                     {"observed", observed_path.filename().string()},
                                     {"R", std::to_string(cfg.replicates)},
                                     {"W_max", std::to_string(cfg.w_max)}});
  const auto path = cfg.out / (corpus_id(observed_path) + ".test.json");
  write_file(path, json{{"provenance", prov.line()}, {"results", out}}.dump(2) + "\n");
  return {{"command", "test"}, {"results", out}, {"files", json::array({path.string()})}};
}

// ---------------------------------------------------------------------------
// reproduce

struct SweepRow {
  std::string model;
  std::string parameter;  // swept parameter name, empty if none
  std::string value;
  ModelEvaluation eval;
};

inline double mean_of(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sd_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

// Statistic sweep over the text, its Bernoulli model, pure SSR, goSSR for
// N_g = 1..12, Simon for W_0 = 1..10 and typewriting, mean and sd over
// realizations.
inline std::vector<SweepRow> statistic_sweep(const Corpus& templ, const RunConfig& cfg,
                                             const StatisticSuite& suite) {
  ModelParams base = model_params(cfg);
  std::vector<ModelSpec> models;
  std::vector<SweepRow> rows;
  auto add = [&](const std::string& model, const std::string& parameter,
                 const std::string& value, ModelSpec spec) {
    rows.push_back({model, parameter, value, {}});
    models.push_back(std::move(spec));
  };

  add("bernoulli", "", "", make_model("bernoulli", templ, base));
  for (std::uint32_t ng = 1; ng <= 12; ++ng) {
    ModelParams p = base;
    p.labels = ng;
    add("gossr", "N_g", std::to_string(ng), make_model("gossr", templ, p));
  }
  {
    // Same seeds as goSSR at N_g = 1, whose reordering is the identity.
    ModelParams p = base;
    p.labels = 1;
    ModelSpec ssr = make_model("ssr", templ, base);
    ssr.seed_key = make_model("gossr", templ, p).stream();
    add("ssr", "", "", std::move(ssr));
  }
  for (std::uint32_t w0 = 1; w0 <= 10; ++w0) {
    ModelParams p = base;
    p.initial_words = w0;
    add("simon", "W_0", std::to_string(w0), make_model("simon", templ, p));
  }
  add("typewriter", "V", std::to_string(base.alphabet), make_model("typewriter", templ, base));

  auto evals = evaluate_models(models, suite, cfg.realizations, cfg.seed, cfg.threads);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].eval = std::move(evals[i]);

  SweepRow text{"text", "", "", {"text", "", {}, std::nullopt}};
  try {
    text.eval.values.push_back(suite.evaluate(templ));
  } catch (const Error& e) {
    text.eval.error = e.what();
  }
  rows.insert(rows.begin(), std::move(text));
  return rows;
}

inline std::string format_sweep(const std::vector<SweepRow>& rows, const StatisticSuite& suite,
                                const Provenance& prov) {
  std::string out = prov.line() + "\nmodel,parameter,value,realizations";
  for (const auto& name : suite.names) out += "," + name + "_mean," + name + "_sd";
  out += ",error\n";
  for (const auto& row : rows) {
    out += row.model + "," + row.parameter + "," + row.value + "," +
           std::to_string(row.eval.values.size());
    for (std::size_t s = 0; s < suite.names.size(); ++s) {
      if (row.eval.error) {
        out += ",,";
        continue;
      }
      std::vector<double> xs;
      for (const auto& v : row.eval.values) xs.push_back(v[s]);
      out += "," + format_double(mean_of(xs)) + "," + format_double(sd_of(xs));
    }
    out += "," + (row.eval.error ? csv_quote(*row.eval.error) : std::string()) + "\n";
  }
  return out;
}

// Models of the p-value table: goSSR at N_g in {1,3,5,7,10}, Simon at the
// configured W_0 and typewriting at the configured V.
inline std::vector<ModelSpec> table_models(const Corpus& templ, const RunConfig& cfg) {
  ModelParams base = model_params(cfg);
  std::vector<ModelSpec> models;
  for (std::uint32_t ng : {1u, 3u, 5u, 7u, 10u}) {
    ModelParams p = base;
    p.labels = ng;
    models.push_back(make_model("gossr", templ, p));
  }
  models.push_back(make_model("simon", templ, base));
  models.push_back(make_model("typewriter", templ, base));
  return models;
}

inline std::string format_table(const TableReport& report, const std::string& id,
                                const Provenance& prov) {
  std::string out = prov.line() + "\nmodel,params";
  for (const auto& s : report.statistics) out += "," + id + ":" + s;
  out += "\n";
  for (const auto& row : report.rows) {
    out += row.model + "," + csv_quote(row.params);
    for (const auto& cell : row.cells)
      out += "," + (cell.error ? std::string("error") : format_double(cell.mean_p));
    out += "\n";
  }
  return out;
}

inline json to_json(const TableReport& report, const std::string& id, const Provenance& prov) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json cells = json::array();
    for (std::size_t s = 0; s < row.cells.size(); ++s) {
      const auto& cell = row.cells[s];
      json c{{"statistic", report.statistics[s]}};
      if (cell.error) {
        c["error"] = *cell.error;
      } else {
        c["mean_p"] = cell.mean_p;
        json results = json::array();
        for (const auto& r : cell.results) results.push_back(to_json(r));
        c["results"] = results;
      }
      cells.push_back(c);
    }
    rows.push_back({{"model", row.model}, {"params", row.params}, {"cells", cells}});
  }
  return {{"provenance", prov.line()},
          {"corpus_id", id},
          {"R", report.replicates},
          {"realizations", report.realizations},
          {"rows", rows}};
}

inline json cmd_reproduce(const RunConfig& cfg) {
  validate(cfg);
  require(cfg.inputs.size() == 1, ErrorKind::input,
          "reproduce takes exactly one template corpus file");
  require(cfg.replicates >= 100, ErrorKind::input, "reproduce needs --replicates >= 100");
  const auto& path = cfg.inputs.front();
  const auto id = corpus_id(path);
  const Corpus templ = read_corpus(path);
  const auto suite = transition_statistics(cfg.w_max);
  const auto prov = provenance(
      cfg, {{"template", path.filename().string()},
            {"W_max", std::to_string(cfg.w_max)},
            {"R", std::to_string(cfg.replicates)},
            {"realizations", std::to_string(cfg.realizations)},
            {"p_n", format_double(cfg.neutral_prob)},
            {"k_0", std::to_string(cfg.initial_weight)},
            {"W_0", std::to_string(cfg.initial_words)},
            {"V", std::to_string(cfg.alphabet)}});

  const auto sweep = statistic_sweep(templ, cfg, suite);
  const auto fig_path = cfg.out / "sweep.csv";
  write_file(fig_path, format_sweep(sweep, suite, prov));

  NullSampler null(templ, suite, cfg.threads);
  TableOptions opt{cfg.replicates, cfg.realizations, cfg.seed, cfg.threads};
  const auto report = run_table(templ, table_models(templ, cfg), null, opt);
  const auto table_path = cfg.out / "pvalues.csv";
  const auto detail_path = cfg.out / "pvalues.json";
  write_file(table_path, format_table(report, id, prov));
  write_file(detail_path, to_json(report, id, prov).dump(2) + "\n");

  json table = json::array();
  for (const auto& row : report.rows) {
    json r{{"model", row.model}, {"params", row.params}};
    for (std::size_t s = 0; s < row.cells.size(); ++s) {
      if (row.cells[s].error) {
        r[report.statistics[s]] = nullptr;
      } else {
        r[report.statistics[s]] = row.cells[s].mean_p;
      }
    }
    table.push_back(r);
  }
  return {{"command", "reproduce"},
          {"corpus_id", id},
          {"table", table},
          {"files", json::array({fig_path.string(), table_path.string(), detail_path.string()})}};
}

inline json run_command(const RunConfig& cfg) {
  if (cfg.command == "ingest") return cmd_ingest(cfg);
  if (cfg.command == "generate") return cmd_generate(cfg);
  if (cfg.command == "analyze") return cmd_analyze(cfg);
  if (cfg.command == "test") return cmd_test(cfg);
  if (cfg.command == "reproduce") return cmd_reproduce(cfg);
  throw Error(ErrorKind::input, "unknown command '" + cfg.command + "'");
}

}  // namespace ssrlab
