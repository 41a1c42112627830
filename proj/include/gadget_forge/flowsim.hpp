#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gadget_forge/gadgets.hpp"

namespace gadget_forge {

/// Real-valued evaluator for a VectorField, compiled once.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const VectorField& field);

  int n() const { return n_; }
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

 private:
  int n_;
  std::vector<RealPolynomial> components_;
  std::optional<TrigEvaluator> trig_;
};

Eigen::VectorXd eval_field(const VectorField& field, const Eigen::VectorXd& x);

/// Exact evaluation of a polynomial field.
std::vector<Rational> eval_field_exact(const VectorField& field, std::span<const Rational> x);

enum class TimeScaling {
  /// Integrate x' = F(x).
  Physical,
  /// Integrate x' = F(x) |x| / |F(x)|. Same orbits as the physical flow away
  /// from equilibria, but the radial speed no longer decays with |x|, so
  /// convergence of a homogeneous las field shows up at exponential rate.
  Orbit,
};

struct IntegratorConfig {
  double initial_step = 1e-3;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double t_max = 50.0;
  double escape_radius = 1e3;
  double convergence_radius = 1e-6;
  double max_step = std::numeric_limits<double>::infinity();
  /// Consecutive accepted steps the stationary test must hold for.
  int stall_window = 3;
  /// |F(x)| < stationary_tol * |x|^stationary_degree while |x| exceeds the
  /// convergence radius marks the state stationary.
  double stationary_tol = 1e-12;
  int stationary_degree = 0;
  TimeScaling time_scaling = TimeScaling::Physical;
  std::size_t max_steps = 2'000'000;
  bool record = true;

  /// Throws ContractError if a field is out of range.
  void validate() const;
};

enum class Outcome { ConvergedToOrigin, Stationary, Escaped, BoundedUndecided };

std::string to_string(Outcome o);

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  Outcome outcome = Outcome::BoundedUndecided;
  double t_end = 0.0;
  double t_escape = 0.0;  // set when outcome == Escaped
  Eigen::VectorXd final_state;
  double max_norm = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

/// Step-size underflow. Carries what was integrated so far.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, Trajectory partial)
      : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

using Rhs = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Dormand-Prince 5(4) with standard step-size control. Deterministic for
/// fixed inputs.
Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& x0, const IntegratorConfig& cfg);
Trajectory integrate(const VectorField& field, const Eigen::VectorXd& x0,
                     const IntegratorConfig& cfg);

using BinaryPoint = std::vector<int>;

inline constexpr int kMaxScanDims = 24;

/// All nonzero x in {0,1}^n with F(x) = 0 exactly, in increasing order with
/// x_1 most significant.
std::vector<BinaryPoint> scan_binary_equilibria(const VectorField& field);

/// Exact check that F(alpha * xbar) = 0 for each alpha. Throws ContractError
/// if F is not a homogeneous polynomial field or F(xbar) != 0.
bool equilibrium_ray_check(const VectorField& field, const BinaryPoint& xbar,
                           std::span<const Rational> alphas);

/// Uniform directions on the unit sphere in R^n (normalized Gaussians).
std::vector<Eigen::VectorXd> sphere_sample(int n, int count, std::uint64_t seed);

struct SphereMinimum {
  double value = 0.0;
  Eigen::VectorXd argmin;
};

/// Multistart projected gradient descent of p over the unit sphere. The
/// returned value is an upper bound on the true minimum. `extra_starts` are
/// tried in addition to `restarts` random directions.
SphereMinimum min_on_sphere(const Polynomial& p, int restarts, std::uint64_t seed,
                            std::span<const Eigen::VectorXd> extra_starts = {});

/// Worker count from GADGET_FORGE_THREADS (0 or unset = hardware).
unsigned worker_count();

/// Runs fn(i) for i in [0, count) across worker threads. Results must be
/// written to per-index slots by the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace gadget_forge
