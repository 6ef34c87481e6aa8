// gibbstest: decide between two Gibbs measures on a subshift of finite
// type from a finite observation window, and predict/verify the
// exponential decay of the test errors.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "gibbstest/asymptotics.hpp"
#include "gibbstest/config.hpp"
#include "gibbstest/errors.hpp"
#include "gibbstest/gibbs.hpp"
#include "gibbstest/hypothesis.hpp"
#include "gibbstest/log_space.hpp"
#include "gibbstest/sampling.hpp"
#include "gibbstest/tilt.hpp"

namespace {

using namespace gibbstest;

int model_index(const std::string& name) {
  if (name == "h0") return 0;
  if (name == "h1") return 1;
  throw ConfigError("--model must be h0 or h1");
}

std::pair<double, double> parse_prior(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw ConfigError("--prior must be two comma-separated weights, e.g. "
                      "0.5,0.5");
  }
  try {
    const double p0 = std::stod(text.substr(0, comma));
    const double p1 = std::stod(text.substr(comma + 1));
    return {p0, p1};
  } catch (const std::exception&) {
    throw ConfigError("cannot parse prior '" + text + "'");
  }
}

void print_test_record(const RandomizedCylinderTest& test,
                       const RiskSummary& risks) {
  std::cout << "n              = " << test.n << "\n";
  std::cout << "log_threshold  = " << format17(test.log_threshold) << "\n";
  std::cout << "chi            = " << format17(test.chi) << "\n";
  std::cout << "alpha (level)  = " << format17(test.alpha) << "\n";
  std::cout << "beta (power)   = " << format17(test.beta) << "\n";
  std::cout << "boundary_mass0 = " << format17(test.boundary_mass0) << "\n";
  std::cout << "type1          = " << format17(risks.type1) << "\n";
  std::cout << "type2          = " << format17(risks.type2) << "\n";
  std::cout << "max_risk       = " << format17(risks.minimax_risk()) << "\n";
}

void maybe_save(const RandomizedCylinderTest& test,
                const std::string& path) {
  if (path.empty()) return;
  save_test(test, path);
  std::cerr << "test record written to " << path << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{
      "Optimal tests (Neyman-Pearson, minimax, Bayes) between two Gibbs "
      "measures on a subshift of finite type, with exact finite-horizon "
      "errors and predicted decay exponents"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "model configuration file")
      ->required();

  // pressure
  auto* pressure_cmd = app.add_subcommand(
      "pressure", "pressure of a model's input potential and its "
                  "normalized-Jacobian summary");
  std::string pressure_model = "h0";
  pressure_cmd->add_option("--model", pressure_model, "h0 or h1");

  // cylinder
  auto* cylinder_cmd = app.add_subcommand(
      "cylinder", "exact probability of one cylinder word");
  std::string cylinder_model = "h0";
  std::string cylinder_word;
  cylinder_cmd->add_option("--model", cylinder_model, "h0 or h1");
  cylinder_cmd->add_option("--word", cylinder_word,
                           "hyphen-separated 1-based word, e.g. 1-2-1")
      ->required();

  // np
  auto* np_cmd = app.add_subcommand(
      "np", "Neyman-Pearson test at a given level");
  int np_n = 1;
  double np_alpha = 0.05;
  std::string np_save;
  np_cmd->add_option("-n", np_n, "horizon (words of length n+1)")
      ->required();
  np_cmd->add_option("--alpha", np_alpha, "significance level in [0,1]")
      ->required();
  np_cmd->add_option("--save-test", np_save, "write the test record (JSON)");

  // minimax
  auto* minimax_cmd = app.add_subcommand(
      "minimax", "error-equalizing minimax test");
  int minimax_n = 1;
  std::string minimax_save;
  minimax_cmd->add_option("-n", minimax_n, "horizon")->required();
  minimax_cmd->add_option("--save-test", minimax_save,
                          "write the test record (JSON)");

  // bayes
  auto* bayes_cmd = app.add_subcommand("bayes", "Bayes solution for a prior");
  int bayes_n = 1;
  std::string bayes_prior = "0.5,0.5";
  std::string bayes_save;
  bayes_cmd->add_option("-n", bayes_n, "horizon")->required();
  bayes_cmd->add_option("--prior", bayes_prior, "prior weights p0,p1")
      ->required();
  bayes_cmd->add_option("--save-test", bayes_save,
                        "write the test record (JSON)");

  // exponents
  auto* exponents_cmd = app.add_subcommand(
      "exponents", "predicted error-decay exponents");
  std::optional<double> exponents_c;
  bool exponents_minimax = false;
  bool exponents_bayes = false;
  std::string exponents_prior = "0.5,0.5";
  exponents_cmd->add_option(
      "--c", exponents_c,
      "threshold growth rate: NP thresholds c_n = exp(c n)");
  exponents_cmd->add_flag("--minimax", exponents_minimax,
                          "minimax (equalized) exponent");
  exponents_cmd->add_flag("--bayes", exponents_bayes, "Bayes exponent");
  exponents_cmd->add_option("--prior", exponents_prior,
                            "prior weights for --bayes");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "exact error curves over a horizon range, CSV + fitted "
               "slopes");
  std::string sweep_kind = "minimax";
  int sweep_min = 1, sweep_max = 10, sweep_burn = 4;
  double sweep_c = 0.0;
  std::string sweep_prior = "0.5,0.5";
  std::string sweep_out;
  sweep_cmd->add_option("--kind", sweep_kind, "np|minimax|bayes");
  sweep_cmd->add_option("--n-min", sweep_min, "first horizon")->required();
  sweep_cmd->add_option("--n-max", sweep_max, "last horizon")->required();
  sweep_cmd->add_option("--c", sweep_c, "threshold rate for --kind np");
  sweep_cmd->add_option("--prior", sweep_prior, "prior for --kind bayes");
  sweep_cmd->add_option("--burn-in", sweep_burn,
                        "exclude horizons below this from the fit");
  sweep_cmd->add_option("--out", sweep_out, "CSV output path");

  // simulate
  auto* simulate_cmd = app.add_subcommand(
      "simulate", "Monte Carlo error estimates for a saved test record");
  std::string simulate_test;
  long simulate_samples = 10000;
  std::optional<std::uint64_t> simulate_seed;
  simulate_cmd->add_option("--test", simulate_test, "test record (JSON)")
      ->required();
  simulate_cmd->add_option("--samples", simulate_samples, "sample count");
  simulate_cmd->add_option("--seed", simulate_seed,
                           "RNG seed (defaults to the config seed)");

  // classify
  auto* classify_cmd = app.add_subcommand(
      "classify", "per-line accept/reject decisions for digit streams");
  int classify_n = 1;
  double classify_alpha = 0.05;
  std::string classify_input;
  std::optional<std::uint64_t> classify_seed;
  classify_cmd->add_option("-n", classify_n, "horizon")->required();
  classify_cmd->add_option("--alpha", classify_alpha, "NP level")->required();
  classify_cmd->add_option("--input", classify_input,
                           "digit file, one observation per line "
                           "(default: stdin)");
  classify_cmd->add_option("--seed", classify_seed,
                           "RNG seed for boundary randomization");

  // Let --config appear after the subcommand name.
  for (CLI::App* sub :
       app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  const ModelConfig config = load_config(config_path);

  if (pressure_cmd->parsed()) {
    const GibbsModel model = build_model(config, model_index(pressure_model));
    std::cout << "pressure = " << format17(model.pressure_of_input()) << "\n";
    const auto& layout = *model.layout();
    std::cout << "normalized Jacobian (range " << model.range() << "):\n";
    for (int e = 0; e < layout.edge_count(); ++e) {
      std::cout << "  J[" << layout.edge_word(e).str()
                << "] = " << format17(std::exp(model.log_jacobian()[e]))
                << "\n";
    }
    std::cout << "stationary context weights:\n";
    for (int c = 0; c < layout.context_count(); ++c) {
      std::cout << "  pi[" << layout.contexts()[c].str() << "] = "
                << format17(std::exp(model.log_context_weights()[c]))
                << "\n";
    }
    return 0;
  }

  if (cylinder_cmd->parsed()) {
    const GibbsModel model = build_model(config, model_index(cylinder_model));
    const Word word = parse_word(cylinder_word, config.d);
    const double log_mass = log_cylinder_probability(model, word);
    std::cout << "probability = " << format17(std::exp(log_mass)) << "\n";
    std::cout << "log         = "
              << (log_mass == kLogZero ? "-inf" : format17(log_mass))
              << "\n";
    return 0;
  }

  if (np_cmd->parsed()) {
    const ModelPair pair = build_pair(config);
    const RandomizedCylinderTest test =
        neyman_pearson(pair, np_n, np_alpha, config.budget);
    print_test_record(test, test_errors(test, pair, config.budget));
    maybe_save(test, np_save);
    return 0;
  }

  if (minimax_cmd->parsed()) {
    const ModelPair pair = build_pair(config);
    const RandomizedCylinderTest test =
        minimax_test(pair, minimax_n, config.budget);
    const RiskSummary risks = test_errors(test, pair, config.budget);
    print_test_record(test, risks);
    std::cout << "risk           = " << format17(risks.minimax_risk())
              << "\n";
    maybe_save(test, minimax_save);
    return 0;
  }

  if (bayes_cmd->parsed()) {
    const ModelPair pair = build_pair(config);
    const auto [p0, p1] = parse_prior(bayes_prior);
    const RandomizedCylinderTest test =
        bayes_test(pair, bayes_n, p0, p1, config.budget);
    const RiskSummary risks = test_errors(test, pair, config.budget);
    print_test_record(test, risks);
    std::cout << "bayes_risk     = " << format17(risks.bayes_risk(p0, p1))
              << "\n";
    maybe_save(test, bayes_save);
    return 0;
  }

  if (exponents_cmd->parsed()) {
    const ModelPair pair = build_pair(config);
    const int chosen = (exponents_c.has_value() ? 1 : 0) +
                       (exponents_minimax ? 1 : 0) + (exponents_bayes ? 1 : 0);
    if (chosen != 1) {
      throw ConfigError(
          "choose exactly one of --c, --minimax, --bayes for exponents");
    }
    if (exponents_c.has_value()) {
      const TiltedFamily family0(pair, 0);
      const TiltedFamily family1(pair, 1);
      const double c = *exponents_c;
      std::cout << "c                = " << format17(c) << "\n";
      std::cout << "type1_exponent   = " << type1_exponent(family0, c).str()
                << "\n";
      std::cout << "type2_exponent   = " << type2_exponent(family1, c).str()
                << "\n";
      const BirkhoffRange range = family0.birkhoff_range();
      std::cout << "derivative_range = [" << format17(range.lower) << ", "
                << format17(range.upper) << "]\n";
      const RateFunction rate((TiltedFamily(pair, 0)));
      if (c > range.lower && c < range.upper) {
        const double t_star = family0.solve_derivative_equals(c);
        std::cout << "t_star           = " << format17(t_star) << "\n";
        std::cout << "rate_function    = " << format17(rate(c)) << "\n";
      }
    } else if (exponents_minimax) {
      const MinimaxExponent mm = minimax_exponent(pair);
      std::cout << "t0                    = " << format17(mm.t0) << "\n";
      std::cout << "minimax_exponent      = " << format17(mm.exponent)
                << "\n";
      std::cout << "equalization_residual = "
                << format17(mm.equalization_residual) << "\n";
      if (std::abs(mm.coupled_system_residual) > 1e-6) {
        std::cerr << "note: literal coupled-system residual "
                  << format17(mm.coupled_system_residual)
                  << " (reduced solution used)\n";
      }
    } else {
      const auto [p0, p1] = parse_prior(exponents_prior);
      const BayesExponent bayes = bayes_exponent(pair, p0, p1);
      std::cout << "t_pi           = " << format17(bayes.t_pi) << "\n";
      std::cout << "chernoff_value = " << format17(bayes.chernoff_value)
                << "\n";
      std::cout << "weighted_rate  = " << format17(bayes.weighted_rate)
                << "\n";
    }
    return 0;
  }

  if (sweep_cmd->parsed()) {
    const ModelPair pair = build_pair(config);
    SweepKind kind;
    SweepParams params;
    if (sweep_kind == "np" || sweep_kind == "np_threshold") {
      kind = SweepKind::np_threshold;
      params.c = sweep_c;
    } else if (sweep_kind == "minimax") {
      kind = SweepKind::minimax;
    } else if (sweep_kind == "bayes") {
      kind = SweepKind::bayes;
      std::tie(params.prior0, params.prior1) = parse_prior(sweep_prior);
    } else {
      throw ConfigError("--kind must be np, minimax, or bayes");
    }
    const ExponentReport report = exponent_sweep(
        pair, kind, params, sweep_min, sweep_max, config.budget, sweep_burn);

    auto describe_fit = [](std::ostream& os, const char* label,
                           const SlopeFit& fit, const ExtendedRate& predicted) {
      os << label << ": ";
      if (fit.valid) {
        os << "slope " << format17(fit.slope) << " (r^2 "
           << format17(fit.r_squared) << ", " << fit.points << " points)";
      } else if (fit.all_zero) {
        os << "all windowed errors are exactly 0";
      } else {
        os << "not enough positive points to fit";
      }
      os << ", predicted " << predicted.str() << "\n";
    };

    if (sweep_out.empty()) {
      write_sweep_csv(std::cout, report);
      describe_fit(std::cerr, "fit log(type1)", report.fit_type1,
                   report.predicted_type1);
      describe_fit(std::cerr, "fit log(type2)", report.fit_type2,
                   report.predicted_type2);
      describe_fit(std::cerr, "fit log(risk)", report.fit_risk,
                   report.predicted_type1);
    } else {
      std::ofstream out(sweep_out, std::ios::binary);
      if (!out) throw ConfigError("cannot write CSV to " + sweep_out);
      write_sweep_csv(out, report);
      describe_fit(std::cout, "fit log(type1)", report.fit_type1,
                   report.predicted_type1);
      describe_fit(std::cout, "fit log(type2)", report.fit_type2,
                   report.predicted_type2);
      describe_fit(std::cout, "fit log(risk)", report.fit_risk,
                   report.predicted_type1);
      std::cerr << "CSV written to " << sweep_out << "\n";
    }
    return 0;
  }

  if (simulate_cmd->parsed()) {
    const ModelPair pair = build_pair(config);
    const RandomizedCylinderTest test = load_test(simulate_test);
    const std::uint64_t seed = simulate_seed.value_or(config.seed);
    const MonteCarloErrors mc =
        monte_carlo_errors(test, pair, simulate_samples, seed);
    std::cout << "samples = " << mc.samples << "\n";
    std::cout << "type1   = " << format17(mc.type1) << " +/- "
              << format17(mc.type1_stderr) << "\n";
    std::cout << "type2   = " << format17(mc.type2) << " +/- "
              << format17(mc.type2_stderr) << "\n";
    return 0;
  }

  if (classify_cmd->parsed()) {
    const ModelPair pair = build_pair(config);
    const RandomizedCylinderTest test =
        neyman_pearson(pair, classify_n, classify_alpha, config.budget);
    std::cerr << "np test: n = " << test.n << ", log_threshold = "
              << format17(test.log_threshold) << ", chi = "
              << format17(test.chi) << "\n";

    std::ifstream file;
    std::istream* in = &std::cin;
    if (!classify_input.empty()) {
      file.open(classify_input);
      if (!file) throw ConfigError("cannot open " + classify_input);
      in = &file;
    }
    const std::uint64_t seed = classify_seed.value_or(config.seed);

    std::string line;
    long line_number = 0;
    while (std::getline(*in, line)) {
      ++line_number;
      std::cout << line_number << "\t";
      try {
        Word word = ingest_digits(line);
        if (word.length() < test.n + 1) {
          throw LengthMismatchError(
              "line has " + std::to_string(word.length()) +
              " digits, test needs " + std::to_string(test.n + 1));
        }
        word.symbols.resize(test.n + 1);  // observe the first n+1 digits
        SplitMix64Stream draws(seed, static_cast<std::uint64_t>(line_number));
        const double ratio = log_likelihood_ratio(pair, word);
        const Decision decision =
            apply_test(test, pair, word, draws.next_uniform01());
        std::cout << (decision == Decision::reject_h0 ? "reject_h0"
                                                      : "accept_h0")
                  << "\tllr = " << format17(ratio) << "\n";
      } catch (const NotAdmissibleError&) {
        std::cout << "inadmissible\n";
      } catch (const Error& e) {
        std::cout << "error\t" << e.what() << "\n";
      }
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
