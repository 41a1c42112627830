#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <set>

#include "gadget_forge/flowsim.hpp"

using namespace gadget_forge;

namespace {

const Instance& example() {
  static const Instance inst = parse_instance("p o3s 5 2\n1 2 3 0\n1 -4 5 0\n");
  return inst;
}

Polynomial sum_fourth(int n) {
  Polynomial p(n);
  for (int i = 0; i < n; ++i) p += pow(Polynomial::variable(n, i), 4);
  return p;
}

// All (b, 1) with b a model of inst, by plain enumeration.
std::set<BinaryPoint> lifted_models(const Instance& inst) {
  std::set<BinaryPoint> out;
  const int n = inst.n_vars();
  for (unsigned k = 0; k < (1u << n); ++k) {
    Assignment b(n);
    BinaryPoint p(n + 1, 1);
    for (int i = 0; i < n; ++i) {
      b[i] = (k >> (n - 1 - i)) & 1;
      p[i] = b[i];
    }
    if (satisfies(inst, b)) out.insert(p);
  }
  return out;
}

}  // namespace

TEST(EvalField, Examples) {
  const Eigen::Vector3d x(1.0, -2.0, 0.5);
  EXPECT_EQ(eval_field(neg_identity_field(3), x), Eigen::VectorXd(-x));
  const VectorField f = gradient_descent_field(sum_fourth(3));
  EXPECT_EQ(eval_field(f, Eigen::VectorXd::Ones(3)), Eigen::VectorXd::Constant(3, -4.0));

  const VectorField fv = gradient_descent_field(build_V(example()));
  const std::vector<Rational> witness = {0, 1, 0, 1, 1, 1};
  for (const Rational& c : eval_field_exact(fv, witness)) EXPECT_EQ(c, 0);
  Eigen::VectorXd w(6);
  w << 0, 1, 0, 1, 1, 1;
  EXPECT_EQ(eval_field(fv, w).norm(), 0.0);
  EXPECT_THROW(eval_field(fv, Eigen::VectorXd::Zero(5)), DimensionError);
}

TEST(Integrate, LinearDecayEndpoint) {
  IntegratorConfig cfg;
  cfg.t_max = 1.0;
  const Eigen::Vector2d x0(1.0, -0.5);
  const Trajectory tr = integrate(neg_identity_field(2), x0, cfg);
  EXPECT_EQ(tr.outcome, Outcome::BoundedUndecided);
  EXPECT_DOUBLE_EQ(tr.t_end, 1.0);
  EXPECT_LT((tr.final_state - x0 * std::exp(-1.0)).norm(), 1e-6);
  EXPECT_EQ(tr.times.size(), tr.states.size());
  EXPECT_EQ(tr.times.front(), 0.0);
}

TEST(Integrate, QuarticBlowUp) {
  const VectorField f = with_quartic_drift(gradient_descent_field(Polynomial(1)));
  IntegratorConfig cfg;
  const Trajectory tr = integrate(f, Eigen::VectorXd::Ones(1), cfg);
  ASSERT_EQ(tr.outcome, Outcome::Escaped);
  const double analytic = (1.0 - std::pow(cfg.escape_radius, -3)) / 3.0;
  EXPECT_NEAR(tr.t_escape, analytic, 1e-6);
  EXPECT_NEAR(tr.t_escape, 1.0 / 3.0, 0.05);
}

TEST(Integrate, ConvergesToOrigin) {
  IntegratorConfig cfg;
  const Trajectory tr = integrate(neg_identity_field(3), Eigen::Vector3d(1, 1, 1), cfg);
  EXPECT_EQ(tr.outcome, Outcome::ConvergedToOrigin);
  // Detected at the end of the first step inside the radius.
  const double t_in = std::log(std::sqrt(3.0) / cfg.convergence_radius);
  EXPECT_GE(tr.t_end, t_in - 1e-6);
  EXPECT_LT(tr.t_end, t_in + 1.0);
}

TEST(Integrate, StationaryAtNonzeroEquilibrium) {
  const VectorField f = gradient_descent_field(build_V(example()));
  Eigen::VectorXd x0(6);
  x0 << 0, 0.5, 0, 0.5, 0.5, 0.5;
  const Trajectory tr = integrate(f, x0, IntegratorConfig{});
  EXPECT_EQ(tr.outcome, Outcome::Stationary);
  EXPECT_LT((tr.final_state - x0).norm(), 1e-12);
}

TEST(Integrate, OrbitScalingKeepsOrbits) {
  // x' = -x - y, y' = x - y spirals along theta = theta0 - ln(r / r0).
  const Rhs spiral = [](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(2);
    out << -v[0] - v[1], v[0] - v[1];
    return out;
  };
  IntegratorConfig cfg;
  cfg.time_scaling = TimeScaling::Orbit;
  cfg.stationary_degree = 1;
  const Eigen::Vector2d x0(1.0, 0.0);
  const Trajectory tr = integrate(spiral, x0, cfg);
  EXPECT_EQ(tr.outcome, Outcome::ConvergedToOrigin);
  for (std::size_t k = 0; k < tr.states.size(); k += 7) {
    const Eigen::VectorXd& s = tr.states[k];
    const double r = s.norm();
    const double theta = -std::log(r);
    EXPECT_LT((s - r * Eigen::Vector2d(std::cos(theta), std::sin(theta))).norm(), 1e-6 * std::max(r, 1e-3));
  }
}

TEST(Integrate, UnsatGradientFlowConvergesInOrbitTime) {
  const Instance inst = parse_instance("p o3s 1 1\n1 1 1 0\n");
  const VectorField f = gradient_descent_field(build_V(inst));
  IntegratorConfig cfg;
  cfg.time_scaling = TimeScaling::Orbit;
  cfg.stationary_degree = 3;
  cfg.record = false;
  for (const Eigen::VectorXd& u : sphere_sample(2, 100, 1)) {
    EXPECT_EQ(integrate(f, 0.5 * u, cfg).outcome, Outcome::ConvergedToOrigin);
  }
}

TEST(Integrate, DeterministicAndRecordsOnRequest) {
  const VectorField f = gradient_descent_field(build_V(example()));
  const Eigen::VectorXd x0 = 0.3 * sphere_sample(6, 1, 4).front();
  IntegratorConfig cfg;
  cfg.t_max = 5.0;
  const Trajectory a = integrate(f, x0, cfg), b = integrate(f, x0, cfg);
  EXPECT_EQ(a.states, b.states);
  EXPECT_EQ(a.times, b.times);
  cfg.record = false;
  const Trajectory c = integrate(f, x0, cfg);
  EXPECT_EQ(c.states.size(), 1u);
  EXPECT_EQ(c.final_state, a.final_state);
}

TEST(Integrate, StepUnderflowThrowsWithPartial) {
  const Rhs bad = [](const Eigen::VectorXd& x) {
    return x[0] > 0.5 ? Eigen::VectorXd::Constant(1, std::nan("")) : Eigen::VectorXd::Ones(1);
  };
  try {
    integrate(bad, Eigen::VectorXd::Constant(1, 0.1), IntegratorConfig{});
    FAIL();
  } catch (const IntegrationError& e) {
    EXPECT_GT(e.partial().accepted_steps, 0u);
    EXPECT_LE(e.partial().final_state[0], 0.5 + 1e-9);
  }
}

TEST(Integrate, ConfigValidation) {
  IntegratorConfig cfg;
  cfg.escape_radius = 0.5;
  EXPECT_THROW(cfg.validate(), ContractError);
  cfg = IntegratorConfig{};
  cfg.rel_tol = -1;
  EXPECT_THROW(integrate(neg_identity_field(1), Eigen::VectorXd::Ones(1), cfg), ContractError);
  EXPECT_THROW(integrate(neg_identity_field(2), Eigen::VectorXd::Ones(1), IntegratorConfig{}),
               DimensionError);
}

TEST(Scan, MatchesLiftedModels) {
  const VectorField f = gradient_descent_field(build_V(example()));
  const auto eq = scan_binary_equilibria(f);
  EXPECT_NE(std::find(eq.begin(), eq.end(), BinaryPoint{0, 1, 0, 1, 1, 1}), eq.end());
  EXPECT_EQ(std::set<BinaryPoint>(eq.begin(), eq.end()), lifted_models(example()));
  EXPECT_TRUE(std::is_sorted(eq.begin(), eq.end()));

  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = random_instance(4 + static_cast<int>(seed % 4), 3, seed);
    const auto e = scan_binary_equilibria(gradient_descent_field(build_V(inst)));
    EXPECT_EQ(std::set<BinaryPoint>(e.begin(), e.end()), lifted_models(inst));
  }
}

TEST(Scan, EmptyCases) {
  const Instance unsat = parse_instance("p o3s 1 1\n1 1 1 0\n");
  EXPECT_TRUE(scan_binary_equilibria(gradient_descent_field(build_V(unsat))).empty());
  EXPECT_TRUE(scan_binary_equilibria(neg_identity_field(4)).empty());
  EXPECT_THROW(scan_binary_equilibria(trig_gradient_field(build_th(unsat))), ContractError);
}

TEST(RayCheck, Examples) {
  const VectorField f = gradient_descent_field(build_V(example()));
  const std::vector<Rational> alphas = {make_rational(1, 10), make_rational(1, 2), 3};
  EXPECT_TRUE(equilibrium_ray_check(f, {0, 1, 0, 1, 1, 1}, alphas));
  const std::vector<Rational> zero = {0};
  EXPECT_TRUE(equilibrium_ray_check(f, {0, 1, 0, 1, 1, 1}, zero));
  EXPECT_THROW(equilibrium_ray_check(f, {1, 1, 1, 1, 1, 1}, alphas), ContractError);
  EXPECT_THROW(equilibrium_ray_check(with_linear_drift(f), {0, 1, 0, 1, 1, 1}, alphas),
               ContractError);
}

TEST(Sphere, SamplesAreUnitAndDeterministic) {
  const auto a = sphere_sample(5, 200, 3), b = sphere_sample(5, 200, 3);
  EXPECT_EQ(a, b);
  for (const auto& p : a) EXPECT_NEAR(p.norm(), 1.0, 1e-14);
  EXPECT_NE(sphere_sample(5, 1, 4).front(), a.front());
}

TEST(Sphere, MinimumOfSumOfFourthPowers) {
  for (int n : {2, 3, 5}) {
    const SphereMinimum m = min_on_sphere(sum_fourth(n), 16, 0);
    EXPECT_NEAR(m.value, 1.0 / n, 1e-6);
    EXPECT_NEAR(m.argmin.norm(), 1.0, 1e-12);
  }
}

TEST(Sphere, SatisfiableGadgetMinimumVanishes) {
  const SphereMinimum m = min_on_sphere(build_V(example()), 24, 0);
  EXPECT_LE(m.value, 1e-8);
}

TEST(Parallel, CoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, WorkerCountFromEnvironment) {
  setenv("GADGET_FORGE_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3u);
  setenv("GADGET_FORGE_THREADS", "0", 1);
  EXPECT_GE(worker_count(), 1u);
  unsetenv("GADGET_FORGE_THREADS");
}
