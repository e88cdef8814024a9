// Writes a synthetic corpus, matching word vectors and a run configuration.

#include <iostream>

#include "CLI11.hpp"
#include "evcore/errors.h"
#include "evcore/synthetic.h"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic event coreference workspace"};
  std::string out = "synthetic";
  evcore::SyntheticOptions options;
  std::size_t dim = 16;
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--seed", options.seed, "Generator seed")->capture_default_str();
  app.add_option("--dim", dim, "Word vector dimension")->capture_default_str();
  app.add_option("--documents", options.documents)->capture_default_str();
  app.add_option("--mentions", options.mentions)->capture_default_str();
  app.add_option("--chains", options.chains)->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    const auto files = evcore::write_synthetic_files(evcore::make_synthetic(options), out, dim, options.seed);
    std::cout << files.config.string() << '\n';
  } catch (const evcore::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
