#include "gadget_forge/gadgets.hpp"

#include <array>

namespace gadget_forge {

namespace {

constexpr std::array<std::pair<FieldKind, const char*>, 5> kKindNames{{
    {FieldKind::PolyGradientDescent, "PolyGradientDescent"},
    {FieldKind::TrigGradientDescent, "TrigGradientDescent"},
    {FieldKind::QuarticDrift, "QuarticDrift"},
    {FieldKind::LinearDrift, "LinearDrift"},
    {FieldKind::NegIdentity, "NegIdentity"},
}};

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }
Polynomial cst(int n, long c) { return Polynomial::constant(n, Rational(c)); }

}  // namespace

std::string to_string(FieldKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

FieldKind field_kind_from_string(const std::string& s) {
  for (const auto& [kind, name] : kKindNames) {
    if (s == name) return kind;
  }
  throw ContractError("unknown vector field kind '" + s + "'");
}

VectorField::VectorField(FieldKind kind, std::vector<Polynomial> components,
                         std::optional<Polynomial> potential)
    : kind_(kind),
      n_(static_cast<int>(components.size())),
      components_(std::move(components)),
      potential_(std::move(potential)) {
  if (kind_ == FieldKind::TrigGradientDescent) {
    throw ContractError("trig fields are built from a TrigPolynomial");
  }
  if (n_ < 1) throw DimensionError("vector field needs at least one component");
  for (const Polynomial& c : components_) {
    if (c.n_vars() != n_) throw DimensionError("field component variable count != dimension");
  }
  if (potential_ && potential_->n_vars() != n_) {
    throw DimensionError("potential variable count != dimension");
  }
}

VectorField::VectorField(TrigPolynomial potential)
    : kind_(FieldKind::TrigGradientDescent), n_(potential.n_vars()), trig_(std::move(potential)) {
  if (n_ < 1) throw DimensionError("vector field needs at least one component");
}

const TrigPolynomial& VectorField::trig_potential() const {
  if (!trig_) throw ContractError("field has no trigonometric potential");
  return *trig_;
}

int VectorField::degree() const {
  if (trig_) return trig_->inner().degree();
  int d = 0;
  for (const Polynomial& c : components_) d = std::max(d, c.degree());
  return d;
}

std::optional<int> VectorField::homogeneous_degree() const {
  if (trig_) return std::nullopt;
  std::optional<int> common;
  for (const Polynomial& c : components_) {
    if (c.is_zero()) continue;
    auto d = is_homogeneous(c);
    if (!d || (common && *common != *d)) return std::nullopt;
    common = d;
  }
  return common.value_or(0);
}

bool SemialgebraicSet::contains(const Eigen::VectorXd& x) const {
  return RealPolynomial(p)(x) <= level.get_d();
}

bool Polytope::contains(std::span<const Rational> x) const {
  if (static_cast<int>(x.size()) != n) throw DimensionError("polytope point dimension mismatch");
  for (const Halfspace& h : halfspaces) {
    Rational s(0);
    for (int i = 0; i < n; ++i) s += h.normal[i] * x[i];
    if (s > h.offset) return false;
  }
  return true;
}

bool Polytope::contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != n) throw DimensionError("polytope point dimension mismatch");
  for (const Halfspace& h : halfspaces) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += h.normal[i].get_d() * x[i];
    if (s > h.offset.get_d() + tol) return false;
  }
  return true;
}

TrigPolynomial build_t(const Instance& inst) {
  const int n = inst.n_vars();
  const Polynomial one = cst(n, 1);
  Polynomial t(n);
  for (int i = 0; i < n; ++i) {
    const Polynomial s = var(n, i);
    t += pow(s, 2) * pow(one - s, 2);
  }
  for (const Clause& c : inst.clauses()) {
    Polynomial e(n);
    for (const Literal& l : c.lits) {
      const Polynomial s = var(n, l.var - 1);
      e += l.negated ? one - s : s;
    }
    e -= one;
    t += pow(e, 2);
  }
  return TrigPolynomial(std::move(t));
}

TrigPolynomial build_th(const Instance& inst) {
  const int n = inst.n_vars();
  const int dim = n + 1;
  const Polynomial y = var(dim, n);
  const Polynomial y2 = pow(y, 2);
  Polynomial t(dim);
  for (int i = 0; i < n; ++i) {
    const Polynomial s = var(dim, i);
    t += pow(s, 2) * pow(y - s, 2);
  }
  for (const Clause& c : inst.clauses()) {
    Polynomial e(dim);
    for (const Literal& l : c.lits) {
      const Polynomial sy = var(dim, l.var - 1) * y;
      e += l.negated ? y2 - sy : sy;
    }
    e -= y2;
    t += pow(e, 2);
  }
  return TrigPolynomial(std::move(t));
}

Polynomial build_V(const Instance& inst) { return build_th(inst).inner(); }

VectorField gradient_descent_field(const Polynomial& p) {
  auto d = is_homogeneous(p);
  if (!d || (*d != 4 && !p.is_zero())) {
    throw ContractError("gradient_descent_field needs a quartic form");
  }
  std::vector<Polynomial> comps;
  comps.reserve(p.n_vars());
  for (Polynomial& g : gradient(p)) comps.push_back(-g);
  return VectorField(FieldKind::PolyGradientDescent, std::move(comps), p);
}

namespace {

VectorField with_drift(const VectorField& f, FieldKind kind, unsigned power) {
  if (f.kind() != FieldKind::PolyGradientDescent) {
    throw ContractError("drift terms can only be added to a PolyGradientDescent field");
  }
  const int n = f.n();
  std::vector<Polynomial> comps = f.components();
  for (int i = 0; i < n; ++i) comps[i] += pow(var(n, i), power);
  return VectorField(kind, std::move(comps), f.potential());
}

}  // namespace

VectorField with_quartic_drift(const VectorField& f) {
  return with_drift(f, FieldKind::QuarticDrift, 4);
}

VectorField with_linear_drift(const VectorField& f) {
  return with_drift(f, FieldKind::LinearDrift, 1);
}

VectorField neg_identity_field(int n) {
  if (n < 1) throw DimensionError("neg_identity_field needs n >= 1");
  std::vector<Polynomial> comps;
  for (int i = 0; i < n; ++i) comps.push_back(-var(n, i));
  return VectorField(FieldKind::NegIdentity, std::move(comps));
}

VectorField trig_gradient_field(const TrigPolynomial& t) { return VectorField(t); }

SemialgebraicSet quartic_set(const Polynomial& p, const Rational& level) {
  auto d = is_homogeneous(p);
  if (!d || *d != 4) throw ContractError("quartic_set needs a quartic form");
  if (level <= 0) throw ContractError("quartic_set level must be positive");
  return {p, level};
}

Polytope collision_polytope(int n) {
  if (n < 1) throw DimensionError("collision_polytope needs n >= 1");
  Polytope poly;
  poly.n = n;
  for (int i = 0; i < n; ++i) {
    Halfspace h{std::vector<Rational>(n, Rational(0)), Rational(0)};
    h.normal[i] = -1;
    poly.halfspaces.push_back(std::move(h));
  }
  poly.halfspaces.push_back({std::vector<Rational>(n, Rational(-1)), Rational(-1)});
  poly.halfspaces.push_back({std::vector<Rational>(n, Rational(1)), Rational(2)});

  // (3 / 2n) 1 has coordinate sum 3/2.
  std::vector<Rational> interior(n, Rational(3) / Rational(2 * n));
  if (!poly.contains(interior)) throw ContractError("collision polytope lost its interior point");
  return poly;
}

ControlSystem control_gadget(const Instance& inst) {
  const int dim = inst.n_vars() + 1;
  if (dim < 2) throw DimensionError("control gadget needs n >= 2");
  const Polynomial x1 = var(dim, 0);
  const Polynomial x2 = var(dim, 1);
  return {gradient_descent_field(build_V(inst)), x1 * pow(x2, 2) - pow(x1, 2) * x2};
}

}  // namespace gadget_forge
