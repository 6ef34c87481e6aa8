#include "gibbstest/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "gibbstest/errors.hpp"
#include "gibbstest/log_space.hpp"
#include "gibbstest/perron.hpp"

namespace gibbstest {

namespace {

// Per-edge values of a k-range table on a layout with range >= k.
Eigen::VectorXd edge_values(const EdgeLayout& layout,
                            const ObservableTable& table, int k) {
  for (const auto& [word, value] : table) {
    (void)value;
    if (word.length() != k) {
      throw ConfigError("table mixes word lengths");
    }
    if (!is_admissible(layout.spec(), word)) {
      throw ConfigError("table key " + word.str() + " is not admissible");
    }
  }
  Eigen::VectorXd out(layout.edge_count());
  for (int e = 0; e < layout.edge_count(); ++e) {
    Word w = layout.edge_word(e);
    w.symbols.resize(k);
    const auto it = table.find(w);
    if (it == table.end()) {
      throw MissingValueError("no value for admissible word " + w.str());
    }
    if (!std::isfinite(it->second)) {
      throw ConfigError("value for word " + w.str() + " is not finite");
    }
    out[e] = it->second;
  }
  return out;
}

// Transfer-operator matrix in log space: entry (to, from) carries the edge
// potential, acting on functions of contexts.
Eigen::MatrixXd transfer_log_matrix(const EdgeLayout& layout,
                                    const Eigen::VectorXd& edge_log_weights) {
  const int n = layout.context_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, kLogZero);
  for (int e = 0; e < layout.edge_count(); ++e) {
    const auto& edge = layout.edges()[e];
    m(edge.to, edge.from) = edge_log_weights[e];
  }
  return m;
}

// Stationary refinement: pi(u) = sum over out-edges u->w of J * pi(w).
Eigen::VectorXd refine_context_weights(const EdgeLayout& layout,
                                       const Eigen::VectorXd& log_jacobian,
                                       Eigen::VectorXd pi) {
  const int n = layout.context_count();
  std::vector<std::vector<std::pair<int, double>>> out(n);  // (to, J)
  for (int e = 0; e < layout.edge_count(); ++e) {
    const auto& edge = layout.edges()[e];
    out[edge.from].push_back({edge.to, std::exp(log_jacobian[e])});
  }
  Eigen::VectorXd next(n);
  for (int it = 0; it < 50000; ++it) {
    for (int u = 0; u < n; ++u) {
      double acc = 0.0;
      for (const auto& [w, j] : out[u]) acc += j * pi[w];
      next[u] = acc;
    }
    next /= next.sum();
    const double step = (next - pi).lpNorm<Eigen::Infinity>();
    pi = next;
    if (step <= 1e-16) break;
  }
  return pi;
}

}  // namespace

double pressure(const FiniteRangePotential& potential, double tolerance,
                int max_iterations) {
  auto layout = EdgeLayout::build(potential.spec, potential.range);
  const Eigen::VectorXd a =
      edge_values(*layout, potential.log_values, potential.range);
  const PerronEigen eigen = perron_eigen_log(transfer_log_matrix(*layout, a),
                                             tolerance, max_iterations);
  return eigen.log_lambda;
}

GibbsModel normalize_potential(const FiniteRangePotential& potential,
                               double tolerance, int max_iterations) {
  auto layout = EdgeLayout::build(potential.spec, potential.range);
  const Eigen::VectorXd a =
      edge_values(*layout, potential.log_values, potential.range);
  const PerronEigen eigen = perron_eigen_log(transfer_log_matrix(*layout, a),
                                             tolerance, max_iterations);

  const int nc = layout->context_count();
  const int ne = layout->edge_count();

  // Spec normalization of the eigendata: sum nu = 1, <nu, h> = 1.
  Eigen::VectorXd nu = eigen.left;
  Eigen::VectorXd h = eigen.right / eigen.left.dot(eigen.right);

  GibbsModel model;
  model.layout_ = layout;
  model.pressure_of_input_ = eigen.log_lambda;
  model.log_h_ = h.array().log();
  model.log_nu_ = nu.array().log();

  model.log_jacobian_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& edge = layout->edges()[e];
    model.log_jacobian_[e] = a[e] + model.log_h_[edge.from] -
                             model.log_h_[edge.to] - eigen.log_lambda;
  }

  // Make the preimage sums exactly 1 context by context; the residual here
  // is the eigen-iteration error.
  Eigen::VectorXd in_sum = Eigen::VectorXd::Constant(nc, kLogZero);
  for (int e = 0; e < ne; ++e) {
    const auto& edge = layout->edges()[e];
    in_sum[edge.to] = log_add(in_sum[edge.to], model.log_jacobian_[e]);
  }
  for (int e = 0; e < ne; ++e) {
    model.log_jacobian_[e] -= in_sum[layout->edges()[e].to];
  }

  Eigen::VectorXd pi = (h.array() * nu.array()).matrix();
  pi /= pi.sum();
  pi = refine_context_weights(*layout, model.log_jacobian_, std::move(pi));
  model.log_pi_ = pi.array().log();
  return model;
}

GibbsModel GibbsModel::recoded(int new_range) const {
  if (new_range < range()) {
    throw ConfigError("cannot recode a model to a shorter range");
  }
  if (new_range == range()) return *this;
  auto target = EdgeLayout::build(spec(), new_range);

  GibbsModel out;
  out.layout_ = target;
  out.pressure_of_input_ = pressure_of_input_;
  out.log_jacobian_.resize(target->edge_count());
  for (int e = 0; e < target->edge_count(); ++e) {
    const Word w = target->edge_word(e);
    const int src = layout_->edge_index(
        std::span<const int>(w.symbols).first(range()));
    out.log_jacobian_[e] = log_jacobian_[src];
  }
  out.log_pi_.resize(target->context_count());
  for (int c = 0; c < target->context_count(); ++c) {
    out.log_pi_[c] = log_cylinder_probability(*this, target->contexts()[c]);
  }
  out.log_h_ = Eigen::VectorXd::Zero(target->context_count());
  out.log_nu_ = out.log_pi_;
  return out;
}

double log_cylinder_probability(const GibbsModel& model, const Word& word) {
  if (word.length() < 1) throw ConfigError("cylinder word must be nonempty");
  if (!is_admissible(model.spec(), word)) return kLogZero;

  const EdgeLayout& layout = *model.layout();
  const int k = layout.range();
  const int len = word.length();
  std::span<const int> s(word.symbols);

  if (len < k - 1) {
    // Shorter than a context: marginalize the context weights over all
    // admissible completions.
    double acc = kLogZero;
    for (int c = 0; c < layout.context_count(); ++c) {
      const auto& ctx = layout.contexts()[c].symbols;
      if (std::equal(word.symbols.begin(), word.symbols.end(), ctx.begin())) {
        acc = log_add(acc, model.log_context_weights()[c]);
      }
    }
    return acc;
  }
  if (len == k - 1) {
    const int c = layout.context_index(s);
    return c < 0 ? kLogZero : model.log_context_weights()[c];
  }

  double acc = 0.0;
  for (int i = 0; i + k <= len; ++i) {
    const int e = layout.edge_index(s.subspan(i, k));
    if (e < 0) return kLogZero;
    acc += model.log_jacobian()[e];
  }
  const int tail = layout.context_index(s.last(k - 1));
  if (tail < 0) return kLogZero;
  return acc + model.log_context_weights()[tail];
}

double cylinder_probability(const GibbsModel& model, const Word& word) {
  return std::exp(log_cylinder_probability(model, word));
}

double entropy_rate(const GibbsModel& model) {
  CompensatedSum sum;
  for (int e = 0; e < model.layout()->edge_count(); ++e) {
    sum.add(-std::exp(model.log_edge_measure(e)) * model.log_jacobian()[e]);
  }
  return sum.value();
}

double relative_entropy_rate(const GibbsModel& p, const GibbsModel& q) {
  if (!(p.spec() == q.spec())) {
    throw SpecMismatchError(
        "relative entropy rate needs models on the same subshift");
  }
  const int range = std::max(p.range(), q.range());
  const GibbsModel pr = p.recoded(range);
  const GibbsModel qr = q.recoded(range);
  CompensatedSum sum;
  for (int e = 0; e < pr.layout()->edge_count(); ++e) {
    sum.add(std::exp(pr.log_edge_measure(e)) *
            (pr.log_jacobian()[e] - qr.log_jacobian()[e]));
  }
  return sum.value();
}

double birkhoff_integral(const GibbsModel& model,
                         const ObservableTable& observable) {
  if (observable.empty()) throw MissingValueError("empty observable table");
  const int k = observable.begin()->first.length();
  const GibbsModel recoded =
      k > model.range() ? model.recoded(k) : model;
  const Eigen::VectorXd values =
      edge_values(*recoded.layout(), observable, k);
  CompensatedSum sum;
  for (int e = 0; e < recoded.layout()->edge_count(); ++e) {
    sum.add(std::exp(recoded.log_edge_measure(e)) * values[e]);
  }
  return sum.value();
}

ModelPair::ModelPair(const GibbsModel& h0, const GibbsModel& h1) {
  *this = unchecked(h0, h1);
  const double gap = (models_[0].log_jacobian() - models_[1].log_jacobian())
                         .cwiseAbs()
                         .maxCoeff();
  if (!(gap > 0.0)) {
    throw DegeneratePairError(
        "the two models define the same measure; the test problem is "
        "degenerate");
  }
}

ModelPair ModelPair::unchecked(const GibbsModel& h0, const GibbsModel& h1) {
  if (!(h0.spec() == h1.spec())) {
    throw SpecMismatchError("pair members live on different subshifts");
  }
  ModelPair pair;
  const int range = std::max(h0.range(), h1.range());
  pair.models_[0] = h0.recoded(range);
  pair.models_[1] = h1.recoded(range);
  return pair;
}

const GibbsModel& ModelPair::model(int index) const {
  if (index != 0 && index != 1) {
    throw ConfigError("model index must be 0 or 1");
  }
  return models_[index];
}

}  // namespace gibbstest
