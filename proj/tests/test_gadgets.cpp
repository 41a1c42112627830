#include <gtest/gtest.h>

#include <random>

#include "gadget_forge/gadgets.hpp"
#include "gadget_forge/json_io.hpp"

using namespace gadget_forge;

namespace {

const Instance& example() {
  static const Instance inst = parse_instance("p o3s 5 2\n1 2 3 0\n1 -4 5 0\n");
  return inst;
}

Polynomial x(int n, int i) { return Polynomial::variable(n, i); }

std::vector<Rational> lifted(const Assignment& b) {
  std::vector<Rational> pt;
  for (bool bit : b) pt.emplace_back(bit ? 1 : 0);
  pt.emplace_back(1);
  return pt;
}

Polynomial sum_fourth(int n) {
  Polynomial p(n);
  for (int i = 0; i < n; ++i) p += pow(x(n, i), 4);
  return p;
}

}  // namespace

TEST(BuildV, ExampleValues) {
  const Polynomial v = build_V(example());
  EXPECT_EQ(v.n_vars(), 6);
  EXPECT_EQ(is_homogeneous(v), 4);
  EXPECT_EQ(eval(v, lifted({0, 1, 0, 1, 1})), 0);
  EXPECT_EQ(eval(v, lifted({0, 0, 1, 0, 0})), 0);
  EXPECT_EQ(eval(v, lifted({0, 0, 0, 0, 0})), 1);
}

TEST(BuildV, ZeroOnLiftedAssignmentsIffSatisfying) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 3 + static_cast<int>(seed % 4);
    const Instance inst = random_instance(n, 2 + static_cast<int>(seed % 3), seed);
    const Polynomial v = build_V(inst);
    for (unsigned k = 0; k < (1u << n); ++k) {
      Assignment b(n);
      for (int i = 0; i < n; ++i) b[i] = (k >> i) & 1;
      EXPECT_EQ(eval(v, lifted(b)) == 0, satisfies(inst, b));
    }
  }
}

TEST(BuildV, NonnegativeAtRandomPoints) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 9);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Polynomial v = build_V(random_instance(6, 4, seed));
    for (int k = 0; k < 50; ++k) {
      std::vector<Rational> pt;
      for (int i = 0; i < 7; ++i) pt.push_back(make_rational(num(rng), den(rng)));
      EXPECT_GE(eval(v, pt), 0);
    }
  }
}

TEST(Fields, GradientDescent) {
  const VectorField f = gradient_descent_field(sum_fourth(3));
  EXPECT_EQ(f.kind(), FieldKind::PolyGradientDescent);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(f.components()[i], Polynomial::constant(3, -4) * pow(x(3, i), 3));
  }
  const VectorField fv = gradient_descent_field(build_V(example()));
  EXPECT_EQ(fv.homogeneous_degree(), 3);
  EXPECT_THROW(gradient_descent_field(pow(x(1, 0), 3)), ContractError);
  EXPECT_THROW(gradient_descent_field(pow(x(1, 0), 4) + x(1, 0)), ContractError);
}

TEST(Fields, Drifts) {
  const VectorField f = gradient_descent_field(build_V(example()));
  const VectorField e = with_quartic_drift(f);
  const VectorField l = with_linear_drift(f);
  EXPECT_EQ(e.kind(), FieldKind::QuarticDrift);
  EXPECT_EQ(l.kind(), FieldKind::LinearDrift);
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(e.components()[i] - f.components()[i], pow(x(6, i), 4));
    EXPECT_EQ(l.components()[i] - f.components()[i], x(6, i));
  }
  EXPECT_EQ(e.homogeneous_degree(), std::nullopt);
  EXPECT_EQ(e.potential(), f.potential());
  EXPECT_THROW(with_quartic_drift(neg_identity_field(3)), ContractError);
  EXPECT_THROW(with_linear_drift(e), ContractError);
}

TEST(Fields, NegIdentityAndTrig) {
  const VectorField n = neg_identity_field(3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(n.components()[i], -x(3, i));
  EXPECT_EQ(n.homogeneous_degree(), 1);
  const VectorField t = trig_gradient_field(build_th(example()));
  EXPECT_TRUE(t.is_trig());
  EXPECT_EQ(t.n(), 6);
  EXPECT_EQ(t.degree(), 4);
  EXPECT_THROW(neg_identity_field(0), DimensionError);
}

TEST(Fields, KindNames) {
  for (FieldKind k : {FieldKind::PolyGradientDescent, FieldKind::TrigGradientDescent,
                      FieldKind::QuarticDrift, FieldKind::LinearDrift, FieldKind::NegIdentity}) {
    EXPECT_EQ(field_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(field_kind_from_string("Bogus"), ContractError);
}

TEST(Sets, QuarticSet) {
  const SemialgebraicSet s = quartic_set(sum_fourth(2));
  EXPECT_TRUE(s.contains(Eigen::Vector2d(0.5, 0.5)));
  EXPECT_TRUE(s.contains(Eigen::Vector2d(1.0, 0.0)));
  EXPECT_FALSE(s.contains(Eigen::Vector2d(1.0, 0.1)));
}

TEST(Sets, CollisionPolytope) {
  const Polytope p = collision_polytope(3);
  EXPECT_EQ(p.halfspaces.size(), 5u);
  const std::vector<Rational> in = {make_rational(1, 2), make_rational(1, 2), 0};
  const std::vector<Rational> below = {make_rational(1, 4), make_rational(1, 4), 0};
  const std::vector<Rational> above = {1, 1, make_rational(1, 100)};
  const std::vector<Rational> neg = {2, 0, make_rational(-1, 2)};
  EXPECT_TRUE(p.contains(in));
  EXPECT_FALSE(p.contains(below));
  EXPECT_FALSE(p.contains(above));
  EXPECT_FALSE(p.contains(neg));
  EXPECT_TRUE(p.contains(Eigen::Vector3d(0.5, 0.5, 0.0)));
  EXPECT_FALSE(p.contains(Eigen::Vector3d(0.5, 0.5, -1e-6)));
  EXPECT_TRUE(p.contains(Eigen::Vector3d(0.5, 0.5, -1e-12), 1e-9));
}

TEST(Control, GScalar) {
  const ControlSystem sys = control_gadget(example());
  EXPECT_EQ(sys.f, gradient_descent_field(build_V(example())));
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const std::vector<Rational> pt = {a, b, 1, 0, 1, 1};
      EXPECT_EQ(eval(sys.g_scalar, pt), 0);
    }
  }
  const std::vector<Rational> pt = {1, 2, 0, 0, 0, 0};
  EXPECT_EQ(eval(sys.g_scalar, pt), 2);
}

TEST(Json, PolynomialRoundTrip) {
  const Polynomial v = build_V(example());
  EXPECT_EQ(polynomial_from_json(to_json(v)), v);
  const Polynomial q = Polynomial::constant(2, make_rational(-7, 3)) * x(2, 1);
  EXPECT_EQ(polynomial_from_json(Json::parse(to_json(q).dump())), q);
}

TEST(Json, FieldRoundTrip) {
  const VectorField f = gradient_descent_field(build_V(example()));
  for (const VectorField& g : {f, with_quartic_drift(f), with_linear_drift(f),
                               neg_identity_field(4), trig_gradient_field(build_th(example()))}) {
    EXPECT_EQ(field_from_json(Json::parse(to_json(g).dump())), g);
  }
  EXPECT_EQ(field_from_json(Json{{"field", to_json(f)}}), f);
  EXPECT_EQ(field_from_json(to_json(control_gadget(example()))), f);
}

TEST(Json, RejectsMalformedRecords) {
  EXPECT_THROW(polynomial_from_json(Json{{"n_vars", 2}}), ContractError);
  const Json bad_len = Json{{"n_vars", 2}, {"terms", {{{"exp", {1}}, {"num", "1"}, {"den", "1"}}}}};
  EXPECT_THROW(polynomial_from_json(bad_len), DimensionError);
  const Json zero_den = Json{{"num", "1"}, {"den", "0"}};
  EXPECT_THROW(rational_from_json(zero_den), ContractError);
}

TEST(Json, CanonicalAndStable) {
  EXPECT_EQ(to_json(build_V(example())).dump(), to_json(build_V(example())).dump());
  EXPECT_EQ(to_json(collision_polytope(3)).dump(), to_json(collision_polytope(3)).dump());
}
