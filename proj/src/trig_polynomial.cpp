#include "gadget_forge/trig_polynomial.hpp"

#include <cmath>

namespace gadget_forge {

TrigPolynomial::TrigPolynomial(Polynomial inner) : inner_(std::move(inner)) {}

Eigen::VectorXd sines(const Eigen::VectorXd& z) { return z.array().sin().matrix(); }

namespace {

void check_dim(const TrigPolynomial& t, const Eigen::VectorXd& z) {
  if (z.size() != t.n_vars()) {
    throw DimensionError("trig point has " + std::to_string(z.size()) + " entries, expected " +
                         std::to_string(t.n_vars()));
  }
}

}  // namespace

double eval_trig(const TrigPolynomial& t, const Eigen::VectorXd& z) {
  check_dim(t, z);
  return TrigEvaluator(t).value(z);
}

Eigen::VectorXd grad_trig(const TrigPolynomial& t, const Eigen::VectorXd& z) {
  check_dim(t, z);
  return TrigEvaluator(t).gradient(z);
}

std::pair<double, double> euler_pairing(const TrigPolynomial& t, const Eigen::VectorXd& z) {
  check_dim(t, z);
  auto d = is_homogeneous(t.inner());
  if (!d || (*d != 4 && !t.inner().is_zero())) {
    throw ContractError("euler_pairing needs a quartic form in sin(z)");
  }
  TrigEvaluator ev(t);
  const Eigen::VectorXd s = sines(z);
  return {ev.value(z), 0.25 * s.dot(ev.gradient_s(s))};
}

TrigEvaluator::TrigEvaluator(const TrigPolynomial& t) : value_(t.inner()) {
  partials_.reserve(t.n_vars());
  for (int i = 0; i < t.n_vars(); ++i) partials_.emplace_back(partial(t.inner(), i));
}

double TrigEvaluator::value(const Eigen::VectorXd& z) const { return value_(sines(z)); }

Eigen::VectorXd TrigEvaluator::gradient_s(const Eigen::VectorXd& s) const {
  Eigen::VectorXd g(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) g[i] = partials_[i](s);
  return g;
}

Eigen::VectorXd TrigEvaluator::gradient(const Eigen::VectorXd& z) const {
  return z.array().cos().matrix().cwiseProduct(gradient_s(sines(z)));
}

}  // namespace gadget_forge
