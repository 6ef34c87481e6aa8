#include "gibbstest/tilt.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <optional>

#include "gibbstest/errors.hpp"
#include "gibbstest/log_space.hpp"
#include "gibbstest/perron.hpp"

namespace gibbstest {

namespace {

// Cache key at 1e-15 granularity; |t| beyond the int64-exact window falls
// back to the bit pattern (such t never repeat in practice).
std::int64_t quantize(double t) {
  if (std::abs(t) < 9.0e3) return std::llround(t * 1.0e15);
  std::int64_t bits;
  static_assert(sizeof(bits) == sizeof(t));
  std::memcpy(&bits, &t, sizeof(bits));
  return bits;
}

struct TiltedEigen {
  double log_lambda;   // free energy value
  double derivative;   // integral of the direction against m_{i,t}
};

}  // namespace

struct TiltedFamily::State {
  ModelPair pair;
  int index;
  double tolerance;
  int max_iterations;
  Eigen::VectorXd base;       // log J_i per edge
  Eigen::VectorXd direction;  // log J_i' - log J_i per edge

  mutable std::mutex lock;
  mutable std::map<std::int64_t, TiltedEigen> cache;
  mutable std::optional<BirkhoffRange> range;

  State(const ModelPair& p, int i, double tol, int max_it)
      : pair(p), index(i), tolerance(tol), max_iterations(max_it) {}

  TiltedEigen eval(double t) const {
    const std::int64_t key = quantize(t);
    {
      std::lock_guard<std::mutex> guard(lock);
      const auto it = cache.find(key);
      if (it != cache.end()) return it->second;
    }

    const EdgeLayout& layout = *pair.layout();
    const int nc = layout.context_count();
    const int ne = layout.edge_count();
    Eigen::VectorXd tilted(ne);
    for (int e = 0; e < ne; ++e) tilted[e] = base[e] + t * direction[e];

    Eigen::MatrixXd log_m = Eigen::MatrixXd::Constant(nc, nc, kLogZero);
    for (int e = 0; e < ne; ++e) {
      const auto& edge = layout.edges()[e];
      log_m(edge.to, edge.from) = tilted[e];
    }
    const PerronEigen eigen =
        perron_eigen_log(log_m, tolerance, max_iterations);

    // Stationary edge measure of the tilted operator:
    // m_t(edge u->w) proportional to exp(tilted) h(u) nu(w).
    const double shift = tilted.maxCoeff();
    Eigen::VectorXd edge_measure(ne);
    double total = 0.0;
    for (int e = 0; e < ne; ++e) {
      const auto& edge = layout.edges()[e];
      edge_measure[e] = std::exp(tilted[e] - shift) *
                        eigen.right[edge.from] * eigen.left[edge.to];
      total += edge_measure[e];
    }
    edge_measure /= total;

    CompensatedSum derivative;
    for (int e = 0; e < ne; ++e) {
      derivative.add(edge_measure[e] * direction[e]);
    }

    const TiltedEigen result{eigen.log_lambda, derivative.value()};
    std::lock_guard<std::mutex> guard(lock);
    cache.emplace(key, result);
    return result;
  }
};

TiltedFamily::TiltedFamily(const ModelPair& pair, int index, double tolerance,
                           int max_iterations) {
  if (index != 0 && index != 1) {
    throw ConfigError("tilted family index must be 0 or 1");
  }
  state_ = std::make_shared<State>(pair, index, tolerance, max_iterations);
  const Eigen::VectorXd& j_i = pair.model(index).log_jacobian();
  const Eigen::VectorXd& j_other = pair.model(1 - index).log_jacobian();
  state_->base = j_i;
  state_->direction = j_other - j_i;
}

const ModelPair& TiltedFamily::pair() const { return state_->pair; }
int TiltedFamily::index() const { return state_->index; }
const Eigen::VectorXd& TiltedFamily::direction() const {
  return state_->direction;
}

double TiltedFamily::free_energy(double t) const {
  if (!std::isfinite(t)) throw ConfigError("tilt parameter must be finite");
  return state_->eval(t).log_lambda;
}

double TiltedFamily::free_energy_derivative(double t) const {
  if (!std::isfinite(t)) throw ConfigError("tilt parameter must be finite");
  return state_->eval(t).derivative;
}

double TiltedFamily::free_energy_second_derivative(double t) const {
  constexpr double kStep = 1e-4;
  return (free_energy_derivative(t + kStep) -
          free_energy_derivative(t - kStep)) /
         (2.0 * kStep);
}

double TiltedFamily::information_function(double t) const {
  return t * free_energy_derivative(t) - free_energy(t);
}

BirkhoffRange TiltedFamily::birkhoff_range() const {
  {
    std::lock_guard<std::mutex> guard(state_->lock);
    if (state_->range) return *state_->range;
  }
  WeightedEdgeGraph graph{state_->pair.layout(), state_->direction};
  const BirkhoffRange range{min_mean_cycle(graph).mean,
                            max_mean_cycle(graph).mean};
  std::lock_guard<std::mutex> guard(state_->lock);
  state_->range = range;
  return range;
}

double TiltedFamily::solve_derivative_equals(double z) const {
  constexpr double kBracketCap = 1024.0;
  constexpr double kTol = 1e-12;
  constexpr int kMaxBisect = 200;

  double lo = -1.0, hi = 1.0;
  double flo = free_energy_derivative(lo);
  double fhi = free_energy_derivative(hi);
  while (flo > z) {
    lo *= 2.0;
    if (lo < -kBracketCap) {
      throw RootNotBracketedError(
          "derivative target below the attainable range");
    }
    flo = free_energy_derivative(lo);
  }
  while (fhi < z) {
    hi *= 2.0;
    if (hi > kBracketCap) {
      throw RootNotBracketedError(
          "derivative target above the attainable range");
    }
    fhi = free_energy_derivative(hi);
  }

  for (int it = 0; it < kMaxBisect && hi - lo > kTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (free_energy_derivative(mid) < z) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double RateFunction::operator()(double z) const {
  if (!std::isfinite(z)) throw ConfigError("rate argument must be finite");
  const BirkhoffRange range = domain();
  constexpr double kEdgeTol = 1e-12;
  if (z < range.lower - kEdgeTol || z > range.upper + kEdgeTol) {
    return std::numeric_limits<double>::infinity();
  }
  double t = 0.0;
  try {
    t = family_.solve_derivative_equals(z);
  } catch (const RootNotBracketedError&) {
    // z sits at (or within tolerance of) an endpoint; the Legendre value
    // there is a limit, approached exponentially fast along the bracket.
    t = z >= 0.5 * (range.lower + range.upper) ? 1024.0 : -1024.0;
  }
  return t * z - family_.free_energy(t);
}

}  // namespace gibbstest
