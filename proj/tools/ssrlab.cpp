// ssrlab: generate model texts, compute transition statistics and run
// Bernoulli-null Monte-Carlo tests from the command line.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ssrlab/commands.hpp"

namespace {

int fail(std::string_view kind, const std::string& message, int code) {
  ssrlab::json err{{"error", {{"kind", kind}, {"message", message}}}};
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  ssrlab::RunConfig cfg;
  CLI::App app{"Sample-space reducing text models and transition-matrix statistics"};
  app.set_config("--config", "", "key=value file supplying defaults for the flags below");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--model", cfg.model, "Model: ssr, gossr, bernoulli, simon, typewriter");
  app.add_option("--ng", cfg.labels, "Number of grammatical labels N_g")->capture_default_str();
  app.add_option("--pn", cfg.neutral_prob, "Neutral-label probability p_n")->capture_default_str();
  app.add_option("--w0", cfg.initial_words, "Simon initial vocabulary W_0")->capture_default_str();
  app.add_option("--k0", cfg.initial_weight, "Simon initial weight k_0")->capture_default_str();
  app.add_option("--alphabet", cfg.alphabet, "Typewriter alphabet size V")->capture_default_str();
  app.add_option("--wmax", cfg.w_max, "Most frequent words kept in the transition matrix")
      ->capture_default_str();
  app.add_option("--replicates", cfg.replicates,
                 "Bernoulli null replicates R")
      ->capture_default_str();
  app.add_option("--realizations", cfg.realizations, "Model realizations per row")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads, 0 = all cores")->capture_default_str();

  struct Sub {
    const char* name;
    const char* help;
    const char* inputs_help;
  };
  const Sub subs[] = {
      {"ingest", "Tokenize a UTF-8 text into corpus, lexicon and rank-frequency files",
       "Raw text file"},
      {"generate", "Sample a model text matched to an ingested template", "Template corpus file"},
      {"analyze", "Compute skew, cos and Zipf statistics of a corpus",
       "Corpus file, optionally a second one for rank-increment distances"},
      {"test", "Monte-Carlo p-values against the template's Bernoulli null",
       "Template corpus file, optionally the corpus to test"},
      {"reproduce", "Run the statistic sweep and the p-value table for a template",
       "Template corpus file"},
  };
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("inputs", cfg.inputs, s.inputs_help)->required();
    sub->callback([&cfg, name = std::string(s.name)] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    std::cout << ssrlab::run_command(cfg).dump(2) << "\n";
  } catch (const ssrlab::Error& e) {
    return fail(ssrlab::to_string(e.kind()), e.what(), 1);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 0;
}
