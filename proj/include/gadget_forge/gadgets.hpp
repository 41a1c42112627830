#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gadget_forge/polynomial.hpp"
#include "gadget_forge/satcore.hpp"
#include "gadget_forge/trig_polynomial.hpp"

namespace gadget_forge {

enum class FieldKind { PolyGradientDescent, TrigGradientDescent, QuarticDrift, LinearDrift, NegIdentity };

std::string to_string(FieldKind k);
FieldKind field_kind_from_string(const std::string& s);

/// A polynomial vector field x' = F(x), or the trigonometric gradient field
/// z' = -grad t(z). Polynomial kinds derived from a potential keep it so that
/// drift constructors can check their input.
class VectorField {
 public:
  /// Components are taken as given; `kind` must be a polynomial kind.
  VectorField(FieldKind kind, std::vector<Polynomial> components,
              std::optional<Polynomial> potential = std::nullopt);
  explicit VectorField(TrigPolynomial potential);

  FieldKind kind() const { return kind_; }
  int n() const { return n_; }
  bool is_trig() const { return kind_ == FieldKind::TrigGradientDescent; }

  /// Polynomial components; empty for the trig kind.
  const std::vector<Polynomial>& components() const { return components_; }
  const std::optional<Polynomial>& potential() const { return potential_; }
  const TrigPolynomial& trig_potential() const;

  /// Largest component degree; the trig kind reports the degree of its
  /// potential in sin(z).
  int degree() const;
  /// Common degree if every component is a form of that degree.
  std::optional<int> homogeneous_degree() const;

  friend bool operator==(const VectorField&, const VectorField&) = default;

 private:
  FieldKind kind_;
  int n_;
  std::vector<Polynomial> components_;
  std::optional<Polynomial> potential_;
  std::optional<TrigPolynomial> trig_;
};

/// {x | p(x) <= level}.
struct SemialgebraicSet {
  Polynomial p;
  Rational level;

  bool contains(const Eigen::VectorXd& x) const;
};

struct Halfspace {
  std::vector<Rational> normal;
  Rational offset;  // normal . x <= offset
};

struct Polytope {
  int n = 0;
  std::vector<Halfspace> halfspaces;

  bool contains(std::span<const Rational> x) const;
  /// Each constraint may be violated by at most `tol`.
  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const;
};

/// x' = f(x) + g(x) u(x) with g(x) = g_scalar(x) * 1 1^T.
struct ControlSystem {
  VectorField f;
  Polynomial g_scalar;
};

/// sum_i s_i^2 (1 - s_i)^2 + sum_clauses (l1 + l2 + l3 - 1)^2, with l = s_i for
/// a positive literal and 1 - s_i for a negated one.
TrigPolynomial build_t(const Instance& inst);

/// Homogenized version of build_t in n + 1 variables; the last variable is y.
TrigPolynomial build_th(const Instance& inst);

/// The inner form of build_th read as an ordinary quartic form in (x, y).
Polynomial build_V(const Instance& inst);

/// -grad p. Throws ContractError unless p is a quartic form (the zero
/// polynomial is accepted as one).
VectorField gradient_descent_field(const Polynomial& p);

/// f + (x_1^4, ..., x_n^4); f must be PolyGradientDescent.
VectorField with_quartic_drift(const VectorField& f);
/// f + (x_1, ..., x_n); f must be PolyGradientDescent.
VectorField with_linear_drift(const VectorField& f);

VectorField neg_identity_field(int n);

/// Gradient descent on the trig potential, z' = -grad t(z).
VectorField trig_gradient_field(const TrigPolynomial& t);

SemialgebraicSet quartic_set(const Polynomial& p, const Rational& level = Rational(1));

/// {x | x_i >= 0, 1 <= sum_i x_i <= 2}.
Polytope collision_polytope(int n);

/// Pairs gradient_descent_field(build_V(inst)) with x1 x2^2 - x1^2 x2.
ControlSystem control_gadget(const Instance& inst);

}  // namespace gadget_forge
