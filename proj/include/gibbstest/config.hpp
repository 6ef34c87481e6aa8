#ifndef GIBBSTEST_CONFIG_HPP
#define GIBBSTEST_CONFIG_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "gibbstest/gibbs.hpp"

namespace gibbstest {

/// Parsed experiment definition: a [subshift] section, two model sections
/// [h0] and [h1] (range k, normalized flag, log-weights keyed by
/// hyphen-separated 1-based words), and an [options] section (enumeration
/// budget, eigen tolerance, seed).
struct ModelConfig {
  int d = 0;
  TransitionMatrix transitions;

  struct ModelSection {
    int k = 0;
    bool normalized = false;
    std::vector<std::pair<std::string, double>> entries;
  };
  ModelSection h0;
  ModelSection h1;

  std::uint64_t budget = kDefaultEnumerationBudget;
  double tolerance = 1e-14;
  std::uint64_t seed = 0;
};

ModelConfig parse_config(std::istream& in);
ModelConfig load_config(const std::string& path);

SubshiftSpec subshift_from(const ModelConfig& config);

/// Builds model 0 or 1. For normalized = true the weights are checked to
/// already sum to 1 over the preimages of every context (tolerance 1e-9).
GibbsModel build_model(const ModelConfig& config, int index);

ModelPair build_pair(const ModelConfig& config);

}  // namespace gibbstest

#endif  // GIBBSTEST_CONFIG_HPP
