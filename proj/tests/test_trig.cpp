#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gadget_forge/gadgets.hpp"
#include "gadget_forge/trig_polynomial.hpp"

using namespace gadget_forge;

namespace {

const Instance& example() {
  static const Instance inst = parse_instance("p o3s 5 2\n1 2 3 0\n1 -4 5 0\n");
  return inst;
}

Polynomial s(int n, int i) { return Polynomial::variable(n, i); }
Polynomial one(int n) { return Polynomial::constant(n, 1); }

Eigen::VectorXd random_z(int n, double r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-r, r);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = u(rng);
  return z;
}

// Central differences of eval_trig.
Eigen::VectorXd fd_gradient(const TrigPolynomial& t, const Eigen::VectorXd& z, double h) {
  Eigen::VectorXd g(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    Eigen::VectorXd zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    g[i] = (eval_trig(t, zp) - eval_trig(t, zm)) / (2 * h);
  }
  return g;
}

}  // namespace

TEST(BuildT, MatchesDisplayedExample) {
  const int n = 5;
  Polynomial want(n);
  for (int i = 0; i < n; ++i) want += pow(s(n, i), 2) * pow(one(n) - s(n, i), 2);
  want += pow(s(n, 0) + s(n, 1) + s(n, 2) - one(n), 2);
  want += pow(s(n, 0) + (one(n) - s(n, 3)) + s(n, 4) - one(n), 2);
  EXPECT_EQ(build_t(example()).inner(), want);
}

TEST(BuildT, ZeroClauses) {
  const int n = 3;
  Polynomial want(n);
  for (int i = 0; i < n; ++i) want += pow(s(n, i), 2) * pow(one(n) - s(n, i), 2);
  EXPECT_EQ(build_t(Instance(3, {})).inner(), want);
}

TEST(BuildT, VanishesAtSatisfyingAssignments) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = random_instance(6, 3, seed);
    const SatResult r = brute_force(inst);
    if (!r.satisfiable) continue;
    Eigen::VectorXd z(6);
    for (int i = 0; i < 6; ++i) z[i] = std::asin(r.witness[i] ? 1.0 : 0.0);
    EXPECT_NEAR(eval_trig(build_t(inst), z), 0.0, 1e-24);
  }
  const double h = std::numbers::pi / 2;
  Eigen::VectorXd z(5);
  z << 0, h, 0, h, h;
  EXPECT_EQ(eval_trig(build_t(example()), z), 0.0);
}

TEST(BuildTh, MatchesDisplayedExample) {
  const int n = 6;
  const Polynomial y = s(n, 5);
  Polynomial want(n);
  for (int i = 0; i < 5; ++i) want += pow(s(n, i), 2) * pow(y - s(n, i), 2);
  want += pow(s(n, 0) * y + s(n, 1) * y + s(n, 2) * y - pow(y, 2), 2);
  want += pow(s(n, 0) * y + (pow(y, 2) - s(n, 3) * y) + s(n, 4) * y - pow(y, 2), 2);
  EXPECT_EQ(build_th(example()).inner(), want);
}

TEST(BuildTh, HomogeneousQuartic) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = random_instance(3 + static_cast<int>(seed % 6), 1 + static_cast<int>(seed % 5), seed);
    EXPECT_EQ(is_homogeneous(build_th(inst).inner()), 4);
  }
}

TEST(BuildTh, RestrictionToYZeroIsSumOfFourthPowers) {
  const Polynomial inner = build_th(example()).inner();
  Polynomial want(6);
  for (int i = 0; i < 5; ++i) want += pow(s(6, i), 4);
  EXPECT_EQ(substitute(inner, 5, 0), want);

  std::mt19937_64 rng(4);
  const TrigPolynomial th = build_th(example());
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd z = random_z(6, 3.0, rng);
    z[5] = (k % 2) ? std::numbers::pi : 0.0;
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) sum += std::pow(std::sin(z[i]), 4);
    EXPECT_NEAR(eval_trig(th, z), sum, 1e-12);
  }
}

TEST(EvalTrig, Origin) {
  EXPECT_EQ(eval_trig(build_th(example()), Eigen::VectorXd::Zero(6)), 0.0);
  EXPECT_THROW(eval_trig(build_th(example()), Eigen::VectorXd::Zero(5)), DimensionError);
}

TEST(GradTrig, ZeroAtOriginAndAtHalfPi) {
  const TrigPolynomial th = build_th(example());
  EXPECT_EQ(grad_trig(th, Eigen::VectorXd::Zero(6)).norm(), 0.0);
  const Eigen::VectorXd half = Eigen::VectorXd::Constant(6, std::numbers::pi / 2);
  EXPECT_LT(grad_trig(th, half).norm(), 1e-12);
}

TEST(GradTrig, MatchesCentralDifferences) {
  std::mt19937_64 rng(21);
  for (const TrigPolynomial& t : {build_t(example()), build_th(example())}) {
    const TrigEvaluator ev(t);
    for (int k = 0; k < 100; ++k) {
      const Eigen::VectorXd z = random_z(t.n_vars(), 1.5, rng);
      const Eigen::VectorXd g = grad_trig(t, z);
      const Eigen::VectorXd fd = fd_gradient(t, z, 1e-5);
      EXPECT_LE((g - fd).norm(), 1e-6 * std::max(1.0, g.norm()));
      EXPECT_LE((ev.gradient(z) - g).norm(), 1e-12 * std::max(1.0, g.norm()));
      EXPECT_NEAR(ev.value(z), eval_trig(t, z), 1e-12);
    }
  }
}

TEST(EulerPairing, AgreesForQuarticInner) {
  std::mt19937_64 rng(9);
  const TrigPolynomial th = build_th(example());
  for (int k = 0; k < 200; ++k) {
    const auto [value, half] = euler_pairing(th, random_z(6, 3.0, rng));
    EXPECT_LE(std::abs(value - half), 1e-10 * std::max(1.0, std::abs(value)));
  }
  const auto [v0, h0] = euler_pairing(th, Eigen::VectorXd::Zero(6));
  EXPECT_EQ(v0, 0.0);
  EXPECT_EQ(h0, 0.0);
  EXPECT_THROW(euler_pairing(build_t(example()), Eigen::VectorXd::Zero(5)), ContractError);
}

TEST(Sines, Elementwise) {
  Eigen::VectorXd z(3);
  z << 0.0, std::numbers::pi / 6, -std::numbers::pi / 2;
  const Eigen::VectorXd sz = sines(z);
  EXPECT_DOUBLE_EQ(sz[1], 0.5);
  EXPECT_DOUBLE_EQ(sz[2], -1.0);
}
