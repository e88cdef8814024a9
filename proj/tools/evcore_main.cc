// Command-line front end: features, train, cluster, score, pipeline.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "evcore/errors.h"
#include "evcore/pipeline.h"

namespace {

enum ExitCode { kOk = 0, kInputError = 2, kTrainingFailure = 3, kModelMismatch = 4, kScoringMismatch = 5 };

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<double> tau;
  std::optional<double> delta;
  std::optional<std::string> mode;
  std::optional<std::string> split;
  // score only
  std::string gold;
  std::string sys;
  std::string corpus;
  std::string out;
};

evcore::RunConfig resolve_config(const Flags& flags) {
  if (flags.config.empty()) throw evcore::ConfigError("--config is required");
  evcore::RunConfig config = evcore::load_run_config(flags.config);
  if (flags.seed) config.train.seed = *flags.seed;
  if (flags.variant) config.variant = evcore::parse_variant(*flags.variant);
  if (flags.tau) config.tau = *flags.tau;
  if (flags.delta) config.delta = *flags.delta;
  if (flags.mode) config.mode = evcore::parse_score_mode(*flags.mode);
  if (flags.split) {
    if (*flags.split == "validation") {
      config.eval_split = evcore::EvalSplit::kValidation;
    } else if (*flags.split == "test") {
      config.eval_split = evcore::EvalSplit::kTest;
    } else {
      throw evcore::ConfigError("--split must be 'validation' or 'test'");
    }
  }
  config.finalize();
  return config;
}

void print_report(const evcore::MetricReport& report) { evcore::write_report_table(std::cout, report, 1); }

int run_score(const Flags& flags) {
  std::optional<evcore::RunConfig> config;
  if (!flags.config.empty()) config = resolve_config(flags);
  const evcore::ScoreMode mode =
      flags.mode ? evcore::parse_score_mode(*flags.mode)
                 : (config ? config->mode : evcore::ScoreMode::kCombined);
  std::filesystem::path gold = flags.gold, sys = flags.sys, out = flags.out;
  std::optional<evcore::Stamp> stamp;
  if (config) {
    const evcore::ArtifactPaths paths{config->output};
    const auto split = evcore::split_name(config->eval_split);
    if (gold.empty()) gold = paths.gold(split);
    if (sys.empty()) sys = paths.chains(config->variant, split);
    if (out.empty()) out = paths.report(config->variant, split, mode);
    stamp = config->stamp();
  }
  if (gold.empty() || sys.empty()) throw evcore::ConfigError("score needs --gold and --sys (or --config)");
  std::optional<evcore::Corpus> corpus;
  if (!flags.corpus.empty()) {
    corpus = evcore::load_corpus(flags.corpus);
  } else if (config && mode == evcore::ScoreMode::kWithinDoc) {
    corpus = evcore::load_corpus(config->corpus);
  }
  const evcore::MetricReport report =
      evcore::cmd_score(gold, sys, mode, corpus ? &*corpus : nullptr, out, stamp ? &*stamp : nullptr);
  print_report(report);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event coreference resolution: features, training, clustering and scoring"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "Run configuration file");
    sub->add_option("--seed", flags.seed, "Override the configured seed");
    sub->add_option("--variant", flags.variant,
                    "CCE, CORE, CORE+CCE, CORE+CCE+LEMMA, LEMMA, LEMMA-DELTA or UNSUPERVISED");
    sub->add_option("--tau", flags.tau, "Fixed clustering threshold instead of the tuned one");
    sub->add_option("--delta", flags.delta, "Fixed lemma-delta threshold instead of the tuned one");
    sub->add_option("--mode", flags.mode, "Scoring mode: combined or within-doc");
    sub->add_option("--split", flags.split, "Evaluation split: validation or test");
  };
  CLI::App* features = app.add_subcommand("features", "Extract feature matrices and fit feature models");
  CLI::App* train = app.add_subcommand("train", "Train the embedding network");
  CLI::App* cluster = app.add_subcommand("cluster", "Cluster the evaluation split into chains");
  CLI::App* score = app.add_subcommand("score", "Score system chains against gold chains");
  CLI::App* pipeline = app.add_subcommand("pipeline", "Run features, train, cluster and score");
  for (CLI::App* sub : {features, train, cluster, score, pipeline}) add_common(sub);
  score->add_option("--gold", flags.gold, "Gold chain file");
  score->add_option("--sys", flags.sys, "System chain file");
  score->add_option("--corpus", flags.corpus, "Corpus file (document membership for within-doc mode)");
  score->add_option("--out", flags.out, "Write the tab-separated report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (score->parsed()) return run_score(flags);
    const evcore::RunConfig config = resolve_config(flags);
    if (features->parsed()) {
      evcore::cmd_features(config, &std::cerr);
    } else if (train->parsed()) {
      evcore::cmd_train(config, &std::cerr);
    } else if (cluster->parsed()) {
      evcore::cmd_cluster(config, &std::cerr);
    } else {
      print_report(evcore::cmd_pipeline(config, &std::cerr));
    }
    return kOk;
  } catch (const evcore::MentionMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (const auto& id : e.only_in_gold()) std::cerr << "  only in gold: " << id << '\n';
    for (const auto& id : e.only_in_sys()) std::cerr << "  only in system: " << id << '\n';
    return kScoringMismatch;
  } catch (const evcore::TrainingDiverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTrainingFailure;
  } catch (const evcore::ModelMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModelMismatch;
  } catch (const evcore::ShapeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModelMismatch;
  } catch (const evcore::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
