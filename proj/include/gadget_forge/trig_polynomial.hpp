#pragma once

#include <span>
#include <utility>

#include <Eigen/Dense>

#include "gadget_forge/polynomial.hpp"

namespace gadget_forge {

/// t(z) = inner(sin z_1, ..., sin z_n). Cosines only ever appear through the
/// chain rule in grad_trig, so the stored representation is sine-only.
class TrigPolynomial {
 public:
  explicit TrigPolynomial(Polynomial inner);

  const Polynomial& inner() const { return inner_; }
  int n_vars() const { return inner_.n_vars(); }

  friend bool operator==(const TrigPolynomial& a, const TrigPolynomial& b) {
    return a.inner_ == b.inner_;
  }

 private:
  Polynomial inner_;
};

Eigen::VectorXd sines(const Eigen::VectorXd& z);

double eval_trig(const TrigPolynomial& t, const Eigen::VectorXd& z);

/// Component i is cos(z_i) * (d inner / d s_i)(sin z).
Eigen::VectorXd grad_trig(const TrigPolynomial& t, const Eigen::VectorXd& z);

/// (t_s(s), s . grad_s t_s(s) / 4) at s = sin z. The two agree when the inner
/// polynomial is a quartic form; throws ContractError otherwise.
std::pair<double, double> euler_pairing(const TrigPolynomial& t, const Eigen::VectorXd& z);

/// Precompiled evaluator for repeated value/gradient queries.
class TrigEvaluator {
 public:
  explicit TrigEvaluator(const TrigPolynomial& t);

  int n_vars() const { return static_cast<int>(partials_.size()); }
  double value(const Eigen::VectorXd& z) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& z) const;
  /// Gradient with respect to s, evaluated at s directly.
  Eigen::VectorXd gradient_s(const Eigen::VectorXd& s) const;

 private:
  RealPolynomial value_;
  std::vector<RealPolynomial> partials_;
};

}  // namespace gadget_forge
