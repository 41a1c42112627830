#include "gadget_forge/flowsim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

namespace gadget_forge {

// --- field evaluation -----------------------------------------------------

FieldEvaluator::FieldEvaluator(const VectorField& field) : n_(field.n()) {
  if (field.is_trig()) {
    trig_.emplace(field.trig_potential());
  } else {
    components_.reserve(field.components().size());
    for (const Polynomial& c : field.components()) components_.emplace_back(c);
  }
}

Eigen::VectorXd FieldEvaluator::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != n_) {
    throw DimensionError("state has " + std::to_string(x.size()) + " entries, field expects " +
                         std::to_string(n_));
  }
  if (trig_) return -trig_->gradient(x);
  Eigen::VectorXd out(n_);
  for (int i = 0; i < n_; ++i) out[i] = components_[i](x);
  return out;
}

Eigen::VectorXd eval_field(const VectorField& field, const Eigen::VectorXd& x) {
  return FieldEvaluator(field)(x);
}

std::vector<Rational> eval_field_exact(const VectorField& field, std::span<const Rational> x) {
  if (field.is_trig()) throw ContractError("exact evaluation needs a polynomial field");
  if (static_cast<int>(x.size()) != field.n()) throw DimensionError("point dimension mismatch");
  std::vector<Rational> out;
  out.reserve(field.n());
  for (const Polynomial& c : field.components()) out.push_back(eval(c, x));
  return out;
}

// --- integrator -----------------------------------------------------------

void IntegratorConfig::validate() const {
  auto positive = [](double v) { return v > 0 && !std::isnan(v); };
  if (!positive(initial_step) || !positive(rel_tol) || !positive(abs_tol) || !positive(t_max) ||
      !positive(escape_radius) || !positive(convergence_radius) || !positive(max_step) ||
      !positive(stationary_tol) || stall_window < 1 || stationary_degree < 0 || max_steps == 0) {
    throw ContractError("integrator settings must be positive");
  }
  if (!(escape_radius > 1.0 && 1.0 > convergence_radius)) {
    throw ContractError("need escape_radius > 1 > convergence_radius");
  }
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::ConvergedToOrigin: return "ConvergedToOrigin";
    case Outcome::Stationary: return "Stationary";
    case Outcome::Escaped: return "Escaped";
    case Outcome::BoundedUndecided: return "BoundedUndecided";
  }
  return "?";
}

namespace {

// Dormand-Prince 5(4) tableau; the system is autonomous so the nodes c_i are
// not needed.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b*, the embedded 4th-order error weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

namespace {

/// Time at which the cubic Hermite interpolant of one step first reaches
/// norm r; the step starts inside the ball and ends outside it.
double crossing_time(const Eigen::VectorXd& x0, const Eigen::VectorXd& f0,
                     const Eigen::VectorXd& x1, const Eigen::VectorXd& f1, double t0, double h,
                     double r) {
  auto at = [&](double s) {
    const double s2 = s * s, s3 = s2 * s;
    return ((2 * s3 - 3 * s2 + 1) * x0 + (s3 - 2 * s2 + s) * h * f0 + (-2 * s3 + 3 * s2) * x1 +
            (s3 - s2) * h * f1)
        .eval();
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (at(mid).norm() > r ? hi : lo) = mid;
  }
  return t0 + hi * h;
}

}  // namespace

Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& x0, const IntegratorConfig& cfg) {
  cfg.validate();
  if (!x0.allFinite()) throw ContractError("initial state must be finite");

  const bool orbit = cfg.time_scaling == TimeScaling::Orbit;
  auto f = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd F = rhs(x);
    if (!orbit) return F;
    const double nf = F.norm();
    if (nf == 0.0 || !std::isfinite(nf)) return Eigen::VectorXd::Zero(x.size());
    return F * (x.norm() / nf);
  };

  Trajectory tr;
  double t = 0.0;
  Eigen::VectorXd x = x0;
  auto record = [&] {
    if (cfg.record) {
      tr.times.push_back(t);
      tr.states.push_back(x);
    }
  };
  auto finish = [&](Outcome o) {
    tr.outcome = o;
    tr.t_end = t;
    tr.final_state = x;
    if (!cfg.record) {
      tr.times.push_back(t);
      tr.states.push_back(x);
    }
    return tr;
  };

  record();
  tr.max_norm = x.norm();
  if (x.norm() < cfg.convergence_radius) return finish(Outcome::ConvergedToOrigin);
  if (x.norm() > cfg.escape_radius) {
    tr.t_escape = 0.0;
    return finish(Outcome::Escaped);
  }

  double h = std::min(cfg.initial_step, cfg.max_step);
  Eigen::VectorXd k1 = f(x);
  Eigen::VectorXd k2, k3, k4, k5, k6, k7, y, xnew;
  int stall = 0;

  while (t < cfg.t_max) {
    if (tr.accepted_steps + tr.rejected_steps >= cfg.max_steps) break;
    const double remaining = cfg.t_max - t;
    if (remaining <= 1e-15 * cfg.t_max) break;
    h = std::min(h, remaining);

    y = x + h * a21 * k1;
    k2 = f(y);
    y = x + h * (a31 * k1 + a32 * k2);
    k3 = f(y);
    y = x + h * (a41 * k1 + a42 * k2 + a43 * k3);
    k4 = f(y);
    y = x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    k5 = f(y);
    y = x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    k6 = f(y);
    xnew = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = f(xnew);

    const Eigen::VectorXd err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const Eigen::ArrayXd scale =
        cfg.abs_tol + cfg.rel_tol * x.array().abs().max(xnew.array().abs());
    const double err = std::sqrt((err_vec.array() / scale).square().mean());

    if (!std::isfinite(err) || err > 1.0) {
      ++tr.rejected_steps;
      const double factor = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= factor;
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        tr.outcome = Outcome::BoundedUndecided;
        tr.t_end = t;
        tr.final_state = x;
        throw IntegrationError("step size underflow at t = " + std::to_string(t), std::move(tr));
      }
      continue;
    }

    const double t_prev = t;
    const Eigen::VectorXd x_prev = x, f_prev = k1;
    t += h;
    x = xnew;
    k1 = k7;
    ++tr.accepted_steps;
    record();

    const double nx = x.norm();
    tr.max_norm = std::max(tr.max_norm, nx);
    if (nx > cfg.escape_radius) {
      tr.t_escape = crossing_time(x_prev, f_prev, x, k7, t_prev, h, cfg.escape_radius);
      return finish(Outcome::Escaped);
    }
    if (nx < cfg.convergence_radius) return finish(Outcome::ConvergedToOrigin);

    const double field_norm = orbit ? rhs(x).norm() : k7.norm();
    const double threshold = cfg.stationary_tol * std::pow(nx, cfg.stationary_degree);
    stall = field_norm < threshold ? stall + 1 : 0;
    if (stall >= cfg.stall_window) return finish(Outcome::Stationary);

    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h = std::min(h * factor, cfg.max_step);
  }
  return finish(Outcome::BoundedUndecided);
}

Trajectory integrate(const VectorField& field, const Eigen::VectorXd& x0,
                     const IntegratorConfig& cfg) {
  if (x0.size() != field.n()) throw DimensionError("initial state dimension mismatch");
  FieldEvaluator ev(field);
  return integrate([&ev](const Eigen::VectorXd& x) { return ev(x); }, x0, cfg);
}

// --- binary equilibria ----------------------------------------------------

namespace {

void require_polynomial_field(const VectorField& field) {
  if (field.is_trig()) throw ContractError("binary scans need a polynomial field");
}

struct MaskedTerms {
  std::vector<std::uint32_t> support;
  std::vector<Rational> coef;
  std::vector<long> small;  // valid when `integral`
  bool integral = true;
};

MaskedTerms mask_terms(const Polynomial& p) {
  MaskedTerms m;
  for (const auto& [e, c] : p.terms()) {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] != 0) s |= 1u << i;
    }
    m.support.push_back(s);
    m.coef.push_back(c);
    if (c.get_den() == 1 && c.get_num().fits_slong_p()) {
      m.small.push_back(c.get_num().get_si());
    } else {
      m.integral = false;
    }
  }
  return m;
}

// Value of the polynomial at the 0/1 point whose set coordinates are `ones`:
// a monomial evaluates to 1 iff its support lies inside `ones`.
bool vanishes_at(const MaskedTerms& m, std::uint32_t ones) {
  if (m.integral) {
    __int128 sum = 0;
    for (std::size_t k = 0; k < m.support.size(); ++k) {
      if ((m.support[k] & ~ones) == 0) sum += m.small[k];
    }
    return sum == 0;
  }
  Rational sum(0);
  for (std::size_t k = 0; k < m.support.size(); ++k) {
    if ((m.support[k] & ~ones) == 0) sum += m.coef[k];
  }
  return sum == 0;
}

}  // namespace

std::vector<BinaryPoint> scan_binary_equilibria(const VectorField& field) {
  require_polynomial_field(field);
  const int n = field.n();
  if (n > kMaxScanDims) {
    throw CapacityError("binary scan limited to " + std::to_string(kMaxScanDims) +
                        " dimensions, field has " + std::to_string(n));
  }
  std::vector<MaskedTerms> comps;
  for (const Polynomial& c : field.components()) comps.push_back(mask_terms(c));

  std::vector<BinaryPoint> out;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    std::uint32_t ones = 0;
    for (int i = 0; i < n; ++i) {
      if ((k >> (n - 1 - i)) & 1u) ones |= 1u << i;
    }
    bool zero = true;
    for (const MaskedTerms& m : comps) {
      if (!vanishes_at(m, ones)) {
        zero = false;
        break;
      }
    }
    if (zero) {
      BinaryPoint p(n);
      for (int i = 0; i < n; ++i) p[i] = (ones >> i) & 1u;
      out.push_back(std::move(p));
    }
  }
  return out;
}

bool equilibrium_ray_check(const VectorField& field, const BinaryPoint& xbar,
                           std::span<const Rational> alphas) {
  require_polynomial_field(field);
  if (!field.homogeneous_degree()) {
    throw ContractError("equilibrium_ray_check needs a homogeneous field");
  }
  if (static_cast<int>(xbar.size()) != field.n()) throw DimensionError("point dimension mismatch");
  std::vector<Rational> x(xbar.begin(), xbar.end());
  for (const Rational& v : eval_field_exact(field, x)) {
    if (v != 0) throw ContractError("equilibrium_ray_check: F(xbar) != 0");
  }
  for (const Rational& a : alphas) {
    std::vector<Rational> ax(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ax[i] = a * x[i];
    for (const Rational& v : eval_field_exact(field, ax)) {
      if (v != 0) return false;
    }
  }
  return true;
}

// --- sphere sampling and minimization -------------------------------------

std::vector<Eigen::VectorXd> sphere_sample(int n, int count, std::uint64_t seed) {
  if (n < 1) throw DimensionError("sphere_sample needs n >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(std::max(count, 0));
  while (static_cast<int>(pts.size()) < count) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    const double norm = v.norm();
    if (norm < 1e-12) continue;
    pts.push_back(v / norm);
  }
  return pts;
}

namespace {

struct Descent {
  double value;
  Eigen::VectorXd point;
};

Descent descend(const RealPolynomial& p, const std::vector<RealPolynomial>& grad,
                Eigen::VectorXd u) {
  constexpr int kIterations = 600;
  constexpr double kArmijo = 0.1;
  constexpr double kMaxAngle = 0.5;
  u.normalize();
  double value = p(u);
  double step = 1.0;
  Eigen::VectorXd g(u.size());
  for (int it = 0; it < kIterations; ++it) {
    for (Eigen::Index i = 0; i < u.size(); ++i) g[i] = grad[i](u);
    const Eigen::VectorXd rg = g - g.dot(u) * u;
    const double rg2 = rg.squaredNorm();
    if (rg2 < 1e-28) break;
    step = std::min(step, kMaxAngle / std::sqrt(rg2));
    bool moved = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      Eigen::VectorXd v = u - step * rg;
      v.normalize();
      const double pv = p(v);
      if (pv <= value - kArmijo * step * rg2) {
        u = v;
        value = pv;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    step *= 2.0;
  }
  return {value, u};
}

}  // namespace

SphereMinimum min_on_sphere(const Polynomial& p, int restarts, std::uint64_t seed,
                            std::span<const Eigen::VectorXd> extra_starts) {
  const int n = p.n_vars();
  if (n < 1) throw DimensionError("min_on_sphere needs n >= 1");
  std::vector<Eigen::VectorXd> starts = sphere_sample(n, std::max(restarts, 0), seed);
  for (const Eigen::VectorXd& s : extra_starts) {
    if (s.size() != n) throw DimensionError("extra start dimension mismatch");
    if (s.norm() > 0) starts.push_back(s);
  }
  if (starts.empty()) throw ContractError("min_on_sphere needs at least one start");

  const RealPolynomial pr(p);
  std::vector<RealPolynomial> grad;
  for (const Polynomial& g : gradient(p)) grad.emplace_back(g);

  std::vector<Descent> results(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) { results[i] = descend(pr, grad, starts[i]); });

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].value < results[best].value) best = i;
  }
  return {results[best].value, results[best].point};
}

// --- parallelism ----------------------------------------------------------

unsigned worker_count() {
  unsigned n = 0;
  if (const char* env = std::getenv("GADGET_FORGE_THREADS")) {
    n = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gadget_forge
