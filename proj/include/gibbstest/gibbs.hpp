#ifndef GIBBSTEST_GIBBS_HPP
#define GIBBSTEST_GIBBS_HPP

#include <Eigen/Dense>
#include <memory>

#include "gibbstest/edge_graph.hpp"
#include "gibbstest/subshift.hpp"

namespace gibbstest {

/// A locally constant potential: one real value per admissible k-word.
struct FiniteRangePotential {
  SubshiftSpec spec;
  int range;                  // k >= 1
  ObservableTable log_values; // admissible k-word -> A on its cylinder
};

/// A Gibbs measure presented by its normalized Jacobian on the edges of
/// the range-K recoding (K = max(k, 2)): J > 0, and for every context the
/// J-values of its incoming edges sum to 1. Cylinder masses factor as
/// stationary context weight of the tail times the product of J along the
/// word. Immutable after construction.
class GibbsModel {
 public:
  const SubshiftSpec& spec() const { return layout_->spec(); }
  int range() const { return layout_->range(); }
  const std::shared_ptr<const EdgeLayout>& layout() const { return layout_; }

  /// log J per edge of the layout.
  const Eigen::VectorXd& log_jacobian() const { return log_jacobian_; }
  /// log of the stationary context weights pi (cylinder masses of the
  /// (K-1)-contexts).
  const Eigen::VectorXd& log_context_weights() const { return log_pi_; }
  /// log of the Perron eigenfunction h of the input potential.
  const Eigen::VectorXd& log_eigenfunction() const { return log_h_; }
  /// log of the eigenmeasure weights nu, normalized to sum 1.
  const Eigen::VectorXd& log_eigenmeasure() const { return log_nu_; }
  /// P(A) of the (un-normalized) input potential.
  double pressure_of_input() const { return pressure_of_input_; }

  /// log mu([edge word]) = log J(edge) + log pi(target context).
  double log_edge_measure(int e) const {
    return log_jacobian_[e] + log_pi_[layout_->edges()[e].to];
  }

  /// Same measure re-expressed at a coarser-to-finer range K' >= range().
  GibbsModel recoded(int new_range) const;

  friend GibbsModel normalize_potential(const FiniteRangePotential& potential,
                                        double tolerance, int max_iterations);
  friend class ModelPair;

 private:
  GibbsModel() = default;

  std::shared_ptr<const EdgeLayout> layout_;
  Eigen::VectorXd log_jacobian_;
  Eigen::VectorXd log_pi_;
  Eigen::VectorXd log_h_;
  Eigen::VectorXd log_nu_;
  double pressure_of_input_ = 0.0;
};

/// log of the Perron eigenvalue of the transfer operator of the potential;
/// equals the variational maximum of entropy plus integral.
double pressure(const FiniteRangePotential& potential,
                double tolerance = 1e-14, int max_iterations = 100000);

/// Builds the Gibbs measure of the potential: J = exp(A + log h - log h
/// after one shift - P(A)), with in-edge sums exactly 1 and stationary
/// context weights refined to the fixed point.
GibbsModel normalize_potential(const FiniteRangePotential& potential,
                               double tolerance = 1e-14,
                               int max_iterations = 100000);

/// Exact cylinder mass in log space; -inf for inadmissible words.
double log_cylinder_probability(const GibbsModel& model, const Word& word);
/// Exponentiating accessor for log_cylinder_probability.
double cylinder_probability(const GibbsModel& model, const Word& word);

/// -sum over edges of stationary edge measure times log J.
double entropy_rate(const GibbsModel& model);

/// Relative entropy rate between two measures on the same subshift:
/// integral of (log J_p - log J_q) with respect to mu_p. Nonnegative, zero
/// only for identical measures.
double relative_entropy_rate(const GibbsModel& p, const GibbsModel& q);

/// Integral of a k-range observable against the model's stationary
/// measure.
double birkhoff_integral(const GibbsModel& model,
                         const ObservableTable& observable);

/// Two distinct Gibbs measures on one subshift, recoded to a common range.
class ModelPair {
 public:
  ModelPair(const GibbsModel& h0, const GibbsModel& h1);

  /// Skips the distinctness check (degenerate test fixtures).
  static ModelPair unchecked(const GibbsModel& h0, const GibbsModel& h1);

  const GibbsModel& model(int index) const;
  const GibbsModel& h0() const { return models_[0]; }
  const GibbsModel& h1() const { return models_[1]; }
  int range() const { return models_[0].range(); }
  const std::shared_ptr<const EdgeLayout>& layout() const {
    return models_[0].layout();
  }
  const SubshiftSpec& spec() const { return models_[0].spec(); }

 private:
  ModelPair() = default;
  GibbsModel models_[2];
};

}  // namespace gibbstest

#endif  // GIBBSTEST_GIBBS_HPP
