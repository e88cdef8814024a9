#include "evcore/pipeline.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "evcore/checkpoint.h"
#include "evcore/errors.h"
#include "evcore/matrix_io.h"
#include "evcore/synthetic.h"
#include "test_util.h"

namespace evcore {
namespace {

namespace fs = std::filesystem;

RunConfig parse(const std::string& text, const fs::path& base = {}) {
  std::istringstream in(text);
  return parse_run_config(in, base, "test.ini");
}

const char* kMinimal =
    "[paths]\ncorpus = c.tsv\nvectors = /abs/v.txt\noutput = out\n"
    "[split]\ntrain = 1-3\nvalidation = 4\ntest = 5,6\n";

TEST(RunConfig, ParsesSectionsAndResolvesPaths) {
  const RunConfig c = parse(std::string(kMinimal) +
                                "[model]\nvariant = lemma-delta\n[train]\nseed = 9\nepochs = 4\n"
                                "[cluster]\nsplit = validation\ntau = 0.5\n[score]\nmode = within-doc\n",
                            "/data/run");
  EXPECT_EQ(c.corpus, fs::path("/data/run/c.tsv"));
  EXPECT_EQ(c.vectors, fs::path("/abs/v.txt"));
  EXPECT_EQ(c.output, fs::path("/data/run/out"));
  EXPECT_EQ(c.split.train, (TopicSet{"1", "2", "3"}));
  EXPECT_EQ(c.split.test, (TopicSet{"5", "6"}));
  EXPECT_EQ(c.variant, Variant::kLemmaDelta);
  EXPECT_EQ(c.train.seed, 9u);
  EXPECT_EQ(c.train.epochs, 4u);
  EXPECT_EQ(c.eval_split, EvalSplit::kValidation);
  EXPECT_EQ(c.tau, 0.5);
  EXPECT_EQ(c.mode, ScoreMode::kWithinDoc);
}

TEST(RunConfig, Defaults) {
  const RunConfig c = parse(kMinimal);
  EXPECT_EQ(c.variant, Variant::kCoreCce);
  EXPECT_EQ(c.train.batch_size, 272u);
  EXPECT_EQ(c.train.epochs, 100u);
  EXPECT_EQ(c.train.dropout, 0.25);
  EXPECT_EQ(c.train.hidden, 1000u);
  EXPECT_EQ(c.train.embedding, 250u);
  EXPECT_EQ(c.train.lr, 0.00085);
  EXPECT_EQ(c.train.weights.cce, 1.0);
  EXPECT_EQ(c.train.weights.lambda1, 2.0);
  EXPECT_EQ(c.train.weights.lambda2, 0.0);
}

TEST(RunConfig, CoreTrainsSlowerWithoutCce) {
  const RunConfig c = parse(std::string(kMinimal) + "[model]\nvariant = CORE\n");
  EXPECT_DOUBLE_EQ(c.train.lr, 0.000085);
  EXPECT_EQ(c.train.weights.cce, 0.0);
  EXPECT_EQ(c.train.weights.lambda1, 2.0);
  EXPECT_EQ(c.train.weights.lambda2, 2.0);
  const RunConfig d = parse(std::string(kMinimal) + "[model]\nvariant = CORE\n[train]\nlr = 0.01\n");
  EXPECT_EQ(d.train.lr, 0.01);
}

TEST(RunConfig, CceRejectsLambdas) {
  EXPECT_THROW(parse(std::string(kMinimal) + "[model]\nvariant = CCE\n[train]\nlambda1 = 1\n"), ConfigError);
  const RunConfig c = parse(std::string(kMinimal) + "[model]\nvariant = CCE\n");
  EXPECT_EQ(c.train.weights.cce, 1.0);
  EXPECT_EQ(c.train.weights.lambda1, 0.0);
  EXPECT_EQ(c.train.weights.lambda2, 0.0);
}

TEST(RunConfig, Errors) {
  EXPECT_THROW(parse(std::string(kMinimal) + "[train]\nlearning_rate = 1\n"), ConfigError);
  EXPECT_THROW(parse(std::string(kMinimal) + "[train]\nepochs = many\n"), ConfigError);
  EXPECT_THROW(parse(std::string(kMinimal) + "[train]\ndropout = 1\n"), ConfigError);
  EXPECT_THROW(parse(std::string(kMinimal) + "[model]\nvariant = BEST\n"), ConfigError);
  EXPECT_THROW(parse(std::string(kMinimal) + "[cluster]\ntau = 1.5\n"), ConfigError);
  EXPECT_THROW(parse("[paths]\ncorpus = c\n[split]\ntrain = 1,2\ntest = 2\n"), ConfigError);
  EXPECT_THROW(parse("stray = 1\n"), ConfigError);
}

TEST(RunConfig, HashIgnoresOutputOnly) {
  const RunConfig a = parse(kMinimal);
  RunConfig b = a;
  b.output = "/elsewhere";
  EXPECT_EQ(a.hash(), b.hash());
  RunConfig c = a;
  c.train.seed = 2;
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(c.stamp().seed, 2u);
  RunConfig d = a;
  d.variant = Variant::kLemma;
  EXPECT_NE(a.hash(), d.hash());
}

TEST(Variants, NamesRoundTrip) {
  for (Variant v : {Variant::kCce, Variant::kCore, Variant::kCoreCce, Variant::kCoreCceLemma, Variant::kLemma,
                    Variant::kLemmaDelta, Variant::kUnsupervised}) {
    EXPECT_EQ(parse_variant(std::string(variant_name(v))), v);
    EXPECT_EQ(parse_variant(std::string(variant_slug(v))), v);
  }
  EXPECT_EQ(parse_variant("core+cce+lemma"), Variant::kCoreCceLemma);
  EXPECT_TRUE(is_learned(Variant::kCore));
  EXPECT_FALSE(is_learned(Variant::kLemmaDelta));
  EXPECT_TRUE(uses_lemmas(Variant::kCoreCceLemma));
}

// Small synthetic workspace with a short training run.
class PipelineRun : public ::testing::Test {
 protected:
  void SetUp() override {
    SyntheticOptions options;
    options.documents = 24;
    options.mentions = 120;
    options.chains = 18;
    options.singleton_chains = 4;
    files_ = write_synthetic_files(make_synthetic(options), dir_.path(), 12, 3);
  }

  RunConfig config(const std::string& variant, const std::string& out) const {
    RunConfig c = load_run_config(files_.config);
    c.variant = parse_variant(variant);
    c.lambda_set = false;
    c.train.epochs = 3;
    c.output = dir_ / out;
    c.finalize();
    return c;
  }

  testing::TempDir dir_{"pipeline"};
  SyntheticFiles files_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST_F(PipelineRun, DeterministicAndStamped) {
  const RunConfig a = config("CORE+CCE", "a"), b = config("CORE+CCE", "b");
  const MetricReport ra = cmd_pipeline(a), rb = cmd_pipeline(b);
  EXPECT_EQ(ra.conll, rb.conll);
  const ArtifactPaths pa{a.output}, pb{b.output};
  EXPECT_EQ(slurp(pa.chains(a.variant, "test")), slurp(pb.chains(b.variant, "test")));
  EXPECT_EQ(slurp(pa.checkpoint(a.variant)), slurp(pb.checkpoint(b.variant)));

  std::ifstream chains(pa.chains(a.variant, "test"));
  std::string first;
  std::getline(chains, first);
  EXPECT_EQ(Stamp::parse(first), a.stamp());
  Stamp mat;
  load_matrix(pa.matrix("test"), &mat);
  EXPECT_EQ(mat, a.stamp());
  EXPECT_EQ(load_checkpoint(pa.checkpoint(a.variant)).config_hash, a.hash());
}

TEST_F(PipelineRun, EveryVariantRuns) {
  for (const char* v : {"CCE", "CORE", "CORE+CCE+LEMMA", "LEMMA", "LEMMA-DELTA", "UNSUPERVISED"}) {
    const RunConfig c = config(v, std::string("v_") + std::string(variant_slug(parse_variant(v))));
    const MetricReport r = cmd_pipeline(c);
    EXPECT_GE(r.b3.f1, 0.0) << v;
    EXPECT_TRUE(fs::exists(ArtifactPaths{c.output}.report(c.variant, "test", ScoreMode::kCombined))) << v;
  }
}

TEST_F(PipelineRun, CheckpointWidthMismatch) {
  const RunConfig c = config("CORE+CCE", "mm");
  cmd_pipeline(c);
  const ArtifactPaths paths{c.output};
  Checkpoint ckpt = load_checkpoint(paths.checkpoint(c.variant));
  Rng rng(1);
  NetShape shape = ckpt.params.shape();
  shape.input += 1;
  ckpt.params = init_params(shape, rng);
  ckpt.adam = AdamState::zeros(shape);
  save_checkpoint(paths.checkpoint(c.variant), ckpt);
  EXPECT_THROW(cmd_cluster(c), ModelMismatch);
}

TEST_F(PipelineRun, ClusterBeforeFeaturesFails) {
  const RunConfig c = config("LEMMA", "empty");
  EXPECT_THROW(cmd_cluster(c), Error);
}

// CLI exit codes.

int run(const std::string& args) {
  const std::string cmd = std::string(EVCORE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

TEST_F(PipelineRun, CliExitCodes) {
  const std::string cfg = files_.config.string();
  EXPECT_EQ(run("pipeline --config " + cfg), 0);
  EXPECT_EQ(run("--no-such-flag"), 2);
  EXPECT_EQ(run("pipeline --config " + (dir_ / "missing.ini").string()), 2);

  write_text(dir_ / "bad.ini", slurp(files_.config) + "[extra]\nkey = 1\n");
  EXPECT_EQ(run("pipeline --config " + (dir_ / "bad.ini").string()), 2);

  write_text(dir_ / "gold.chains", "a\tb\nc\n");
  write_text(dir_ / "sys.chains", "a\tb\nx\n");
  EXPECT_EQ(run("score --gold " + (dir_ / "gold.chains").string() + " --sys " + (dir_ / "sys.chains").string()), 5);
  EXPECT_EQ(run("score --gold " + (dir_ / "gold.chains").string() + " --sys " + (dir_ / "gold.chains").string()), 0);

  const RunConfig c = load_run_config(files_.config);
  const ArtifactPaths paths{c.output};
  Checkpoint ckpt = load_checkpoint(paths.checkpoint(c.variant));
  Rng rng(2);
  NetShape shape = ckpt.params.shape();
  shape.input += 3;
  ckpt.params = init_params(shape, rng);
  ckpt.adam = AdamState::zeros(shape);
  save_checkpoint(paths.checkpoint(c.variant), ckpt);
  EXPECT_EQ(run("cluster --config " + cfg), 4);
}

TEST_F(PipelineRun, CliDivergenceExitCode) {
  std::string text = slurp(files_.config);
  text.replace(text.find("epochs = 20"), 11, "epochs = 5\nlr = 1e300");
  write_text(dir_ / "diverge.ini", text);
  EXPECT_EQ(run("pipeline --config " + (dir_ / "diverge.ini").string()), 3);
}

}  // namespace
}  // namespace evcore
