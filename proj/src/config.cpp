#include "gibbstest/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gibbstest/errors.hpp"
#include "gibbstest/log_space.hpp"

namespace gibbstest {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find_first_of("#;");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

double parse_double(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + text + "' for " + context);
  }
}

std::uint64_t parse_u64(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse integer '" + text + "' for " + context);
  }
}

bool parse_bool(const std::string& text, const std::string& context) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("cannot parse boolean '" + text + "' for " + context);
}

}  // namespace

ModelConfig parse_config(std::istream& in) {
  ModelConfig config;
  std::vector<std::vector<int>> rows;
  bool saw_subshift = false, saw_h0 = false, saw_h1 = false;

  std::string section;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_number) +
                          ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section == "subshift") {
        saw_subshift = true;
      } else if (section == "h0") {
        saw_h0 = true;
      } else if (section == "h1") {
        saw_h1 = true;
      } else if (section != "options") {
        throw ConfigError("line " + std::to_string(line_number) +
                          ": unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": empty key or value");
    }

    if (section == "subshift") {
      if (key == "d") {
        config.d = static_cast<int>(parse_u64(value, "subshift d"));
      } else if (key == "row") {
        std::vector<int> row;
        std::istringstream is(value);
        int x;
        while (is >> x) row.push_back(x);
        if (!is.eof()) {
          throw ConfigError("line " + std::to_string(line_number) +
                            ": transition row must be 0/1 integers");
        }
        rows.push_back(std::move(row));
      } else {
        throw ConfigError("line " + std::to_string(line_number) +
                          ": unknown subshift key '" + key + "'");
      }
    } else if (section == "h0" || section == "h1") {
      ModelConfig::ModelSection& model = section == "h0" ? config.h0
                                                         : config.h1;
      if (key == "k") {
        model.k = static_cast<int>(parse_u64(value, section + " k"));
      } else if (key == "normalized") {
        model.normalized = parse_bool(value, section + " normalized");
      } else {
        model.entries.push_back(
            {key, parse_double(value, section + " value for " + key)});
      }
    } else if (section == "options") {
      if (key == "budget") {
        config.budget = parse_u64(value, "options budget");
      } else if (key == "tolerance") {
        config.tolerance = parse_double(value, "options tolerance");
      } else if (key == "seed") {
        config.seed = parse_u64(value, "options seed");
      } else {
        throw ConfigError("line " + std::to_string(line_number) +
                          ": unknown options key '" + key + "'");
      }
    } else {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": key outside any section");
    }
  }

  if (!saw_subshift) throw ConfigError("missing [subshift] section");
  if (!saw_h0 || !saw_h1) throw ConfigError("config needs [h0] and [h1]");
  if (config.d < 2) throw ConfigError("subshift d must be >= 2");
  if (static_cast<int>(rows.size()) != config.d) {
    throw ConfigError("expected " + std::to_string(config.d) +
                      " transition rows, got " + std::to_string(rows.size()));
  }
  config.transitions.resize(config.d, config.d);
  for (int i = 0; i < config.d; ++i) {
    if (static_cast<int>(rows[i].size()) != config.d) {
      throw ConfigError("transition row " + std::to_string(i + 1) +
                        " must have " + std::to_string(config.d) +
                        " entries");
    }
    for (int j = 0; j < config.d; ++j) config.transitions(i, j) = rows[i][j];
  }
  for (const auto* model : {&config.h0, &config.h1}) {
    if (model->k < 1) throw ConfigError("model range k must be >= 1");
    if (model->entries.empty()) throw ConfigError("model table is empty");
  }
  return config;
}

ModelConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

SubshiftSpec subshift_from(const ModelConfig& config) {
  return validate_subshift(config.d, config.transitions);
}

GibbsModel build_model(const ModelConfig& config, int index) {
  if (index != 0 && index != 1) throw ConfigError("model index must be 0/1");
  const ModelConfig::ModelSection& section =
      index == 0 ? config.h0 : config.h1;
  const SubshiftSpec spec = subshift_from(config);

  FiniteRangePotential potential{spec, section.k, {}};
  for (const auto& [key, value] : section.entries) {
    Word word = parse_word(key, config.d);
    if (word.length() != section.k) {
      throw ConfigError("table key '" + key + "' has length " +
                        std::to_string(word.length()) + ", expected k = " +
                        std::to_string(section.k));
    }
    if (!is_admissible(spec, word)) {
      throw ConfigError("table key '" + key + "' is not admissible");
    }
    if (potential.log_values.count(word)) {
      throw ConfigError("duplicate table key '" + key + "'");
    }
    potential.log_values[word] = value;
  }

  if (section.normalized) {
    // Verify sum over preimages = 1 for every context before trusting the
    // flag; normalize_potential is idempotent on genuinely normalized
    // input.
    auto layout = EdgeLayout::build(spec, section.k, config.budget);
    Eigen::VectorXd in_sum =
        Eigen::VectorXd::Constant(layout->context_count(), kLogZero);
    for (int e = 0; e < layout->edge_count(); ++e) {
      Word w = layout->edge_word(e);
      w.symbols.resize(section.k);
      const auto it = potential.log_values.find(w);
      if (it == potential.log_values.end()) {
        throw MissingValueError("no value for admissible word " + w.str());
      }
      const auto& edge = layout->edges()[e];
      in_sum[edge.to] = log_add(in_sum[edge.to], it->second);
    }
    for (int c = 0; c < layout->context_count(); ++c) {
      if (std::abs(in_sum[c]) > 1e-9) {
        throw ConfigError(
            "model is flagged normalized but weights into context " +
            layout->contexts()[c].str() + " sum to exp(" +
            std::to_string(in_sum[c]) + ")");
      }
    }
  }
  return normalize_potential(potential, config.tolerance);
}

ModelPair build_pair(const ModelConfig& config) {
  return ModelPair(build_model(config, 0), build_model(config, 1));
}

}  // namespace gibbstest
