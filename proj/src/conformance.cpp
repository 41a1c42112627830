#include "gadget_forge/conformance.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace gadget_forge {

namespace {

constexpr std::pair<PartId, const char*> kPartNames[] = {
    {PartId::Thm1, "thm1"}, {PartId::A, "a"}, {PartId::B, "b"}, {PartId::C, "c"},
    {PartId::D, "d"},       {PartId::E, "e"}, {PartId::F, "f"}, {PartId::G, "g"},
    {PartId::H, "h"},       {PartId::I, "i"},
};

}  // namespace

std::string to_string(PartId p) {
  for (const auto& [id, name] : kPartNames) {
    if (id == p) return name;
  }
  return "?";
}

PartId part_from_string(const std::string& s) {
  for (const auto& [id, name] : kPartNames) {
    if (s == name) return id;
  }
  throw ContractError("unknown part '" + s + "' (expected thm1 or a..i)");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

// --- symbolic identities --------------------------------------------------

bool IdentityResults::all() const {
  return a_minus8p && b_minus4p && e_decomposition && f_decomposition && g_minus8v &&
         e_degrees[0] == 6 && e_degrees[1] == 7 && f_degrees[0] == 6 && f_degrees[1] == 4;
}

IdentityResults identity_suite_for(const Polynomial& v) {
  return identity_suite_for(v, gradient_descent_field(v));
}

IdentityResults identity_suite_for(const Polynomial& v, const VectorField& f) {
  if (f.is_trig() || f.n() != v.n_vars()) {
    throw DimensionError("identity suite needs a polynomial field over the potential's variables");
  }
  const int n = v.n_vars();
  const std::vector<Polynomial> grad = gradient(v);
  std::vector<Polynomial> x, x4;
  for (int i = 0; i < n; ++i) {
    x.push_back(Polynomial::variable(n, i));
    x4.push_back(pow(x.back(), 4));
  }
  IdentityResults r;
  // <2x, -grad p> + 8p
  {
    Polynomial lhs(n);
    for (int i = 0; i < n; ++i) lhs += scale(x[i] * f.components()[i], Rational(2));
    r.a_minus8p = is_zero(lhs + scale(v, Rational(8)));
  }
  // <grad p, -x> + 4p, with -x the NegIdentity field
  {
    const VectorField neg = neg_identity_field(n);
    r.b_minus4p = is_zero(dot(grad, neg.components()) + scale(v, Rational(4)));
  }
  const Polynomial grad_sq = -dot(grad, grad);
  // Vdot along f + x^4 and f + x
  {
    const Polynomial vdot = dot(grad, with_quartic_drift(f).components());
    const Polynomial drift = dot(grad, x4);
    r.e_decomposition = is_zero(vdot - grad_sq - drift);
    r.e_degrees[0] = grad_sq.is_zero() ? std::nullopt : is_homogeneous(grad_sq);
    r.e_degrees[1] = drift.is_zero() ? std::nullopt : is_homogeneous(drift);
  }
  {
    const Polynomial vdot = dot(grad, with_linear_drift(f).components());
    const Polynomial drift = dot(grad, x);
    r.f_decomposition = is_zero(vdot - grad_sq - drift);
    r.f_degrees[0] = grad_sq.is_zero() ? std::nullopt : is_homogeneous(grad_sq);
    r.f_degrees[1] = drift.is_zero() ? std::nullopt : is_homogeneous(drift);
  }
  // W = |x|^2, Wdot = <grad W, f>
  {
    Polynomial w(n);
    for (int i = 0; i < n; ++i) w += pow(x[i], 2);
    r.g_minus8v = is_zero(dot(gradient(w), f.components()) + scale(v, Rational(8)));
  }
  return r;
}

IdentityResults identity_suite(const Instance& inst) { return identity_suite_for(build_V(inst)); }

// --- shared machinery -----------------------------------------------------

namespace {

Json vec_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd to_vec(const BinaryPoint& p) {
  Eigen::VectorXd v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = p[i];
  return v;
}

std::uint64_t part_seed(std::uint64_t seed, PartId part, std::uint64_t stream) {
  std::uint64_t h = seed * 0x9E3779B97F4A7C15ull;
  h ^= (static_cast<std::uint64_t>(part) + 1) * 0xBF58476D1CE4E5B9ull;
  h ^= (stream + 1) * 0x94D049BB133111EBull;
  return h;
}

struct Context {
  const Instance& inst;
  SatResult oracle;
  int dim;
  Polynomial v;
  VectorField f;
  std::vector<BinaryPoint> equilibria;
  RealPolynomial v_real;
  std::vector<RealPolynomial> grad_real;

  explicit Context(const Instance& i)
      : inst(i),
        oracle(brute_force(i)),
        dim(i.n_vars() + 1),
        v(build_V(i)),
        f(gradient_descent_field(v)),
        equilibria(scan_binary_equilibria(f)),
        v_real(v) {
    for (const Polynomial& g : gradient(v)) grad_real.emplace_back(g);
  }

  Eigen::VectorXd grad_v(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g(dim);
    for (int i = 0; i < dim; ++i) g[i] = grad_real[i](x);
    return g;
  }
};

IntegratorConfig orbit_config(const VerifyConfig& vc, int degree) {
  IntegratorConfig cfg;
  cfg.t_max = vc.t_max;
  cfg.time_scaling = TimeScaling::Orbit;
  cfg.stationary_degree = degree;
  cfg.record = false;
  return cfg;
}

IntegratorConfig physical_config(const VerifyConfig& vc) {
  IntegratorConfig cfg;
  cfg.t_max = vc.t_max;
  return cfg;
}

/// Ray-escape witnesses stop at radius 10: transverse stiffness grows like
/// |x|^2 and the escape is already unambiguous there.
IntegratorConfig escape_config(const VerifyConfig& vc) {
  IntegratorConfig cfg = physical_config(vc);
  cfg.escape_radius = 10.0;
  return cfg;
}

struct EnsembleStats {
  int converged = 0, stationary = 0, escaped = 0, undecided = 0, errors = 0;
  double max_norm = 0.0;

  /// true: all converged; false: some trajectory stalls or escapes; empty:
  /// horizon exhausted without a decisive outcome.
  std::optional<bool> all_converged() const {
    if (stationary + escaped > 0) return false;
    if (undecided + errors > 0) return std::nullopt;
    return true;
  }

  Json to_json() const {
    return Json{{"converged", converged}, {"stationary", stationary}, {"escaped", escaped},
                {"undecided", undecided}, {"integration_errors", errors}, {"max_norm", max_norm}};
  }
};

EnsembleStats run_ensemble(const Rhs& rhs, const std::vector<Eigen::VectorXd>& starts,
                           const IntegratorConfig& cfg) {
  std::vector<std::optional<Trajectory>> results(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    try {
      results[i] = integrate(rhs, starts[i], cfg);
    } catch (const IntegrationError&) {
      results[i].reset();
    }
  });
  EnsembleStats s;
  for (const auto& r : results) {
    if (!r) {
      ++s.errors;
      continue;
    }
    s.max_norm = std::max(s.max_norm, r->max_norm);
    switch (r->outcome) {
      case Outcome::ConvergedToOrigin: ++s.converged; break;
      case Outcome::Stationary: ++s.stationary; break;
      case Outcome::Escaped: ++s.escaped; break;
      case Outcome::BoundedUndecided: ++s.undecided; break;
    }
  }
  return s;
}

Rhs field_rhs(const VectorField& field) {
  auto ev = std::make_shared<FieldEvaluator>(field);
  return [ev](const Eigen::VectorXd& x) { return (*ev)(x); };
}

std::vector<Eigen::VectorXd> shell(int dim, int count, double radius, std::uint64_t seed) {
  auto pts = sphere_sample(dim, count, seed);
  for (auto& p : pts) p *= radius;
  return pts;
}

const Rational kRayAlphas[] = {Rational(1, 10), Rational(1, 2), Rational(3)};

/// Nonzero binary equilibria refute every "stable" property: the whole ray
/// through them consists of equilibria.
bool ray_refutation(const Context& ctx, PartReport& rep) {
  if (ctx.equilibria.empty()) return false;
  const BinaryPoint& xbar = ctx.equilibria.front();
  const bool ray = equilibrium_ray_check(ctx.f, xbar, kRayAlphas);
  rep.witnesses.push_back(Json{{"kind", "equilibrium_ray"},
                               {"point", xbar},
                               {"alphas", {"1/10", "1/2", "3"}},
                               {"exact_zero_on_ray", ray},
                               {"binary_equilibria", ctx.equilibria.size()}});
  if (!ray) rep.notes.push_back("equilibrium ray check failed");
  return ray;
}

/// V-dot along `drift_field` negative at every sample on the shell |x| = r.
bool vdot_negative_on_shell(const Context& ctx, const FieldEvaluator& field, double r, int count,
                            std::uint64_t seed) {
  for (const Eigen::VectorXd& x : shell(ctx.dim, count, r, seed)) {
    if (!(ctx.grad_v(x).dot(field(x)) < 0.0)) return false;
  }
  return true;
}

double off_ray_deviation(const Trajectory& tr, const Eigen::VectorXd& direction) {
  const Eigen::VectorXd d = direction.normalized();
  double worst = 0.0;
  for (const Eigen::VectorXd& x : tr.states) {
    const double nx = x.norm();
    if (nx == 0.0) continue;
    worst = std::max(worst, (x - x.dot(d) * d).norm() / nx);
  }
  return worst;
}

// --- per-part protocols ---------------------------------------------------
//
// Each protocol observes the property without looking at the oracle: exact
// binary-equilibrium evidence refutes, otherwise numerical evidence
// (ensembles, sampling, multistart) supports it. The caller compares the
// observation against the oracle's prediction.

std::optional<bool> check_thm1(const Context& ctx, const VerifyConfig& vc, PartReport& rep) {
  const TrigPolynomial th = build_th(ctx.inst);
  const TrigEvaluator ev(th);
  const VectorField field = trig_gradient_field(th);

  if (!ctx.equilibria.empty()) {
    // Zeros of the quartic form in s give the zero path z(alpha) = arcsin(alpha s).
    const BinaryPoint& s = ctx.equilibria.front();
    double worst = 0.0;
    Json values = Json::array();
    for (int k = 1; k <= 10; ++k) {
      const double alpha = 0.1 * k;
      Eigen::VectorXd z(ctx.dim);
      for (int i = 0; i < ctx.dim; ++i) z[i] = std::asin(alpha * s[i]);
      const double val = ev.value(z);
      worst = std::max(worst, std::abs(val));
      values.push_back(val);
    }
    Eigen::VectorXd z0(ctx.dim);
    for (int i = 0; i < ctx.dim; ++i) z0[i] = std::asin(0.5 * s[i]);
    IntegratorConfig cfg = physical_config(vc);
    const Trajectory tr = integrate(field, z0, cfg);
    const bool path_ok = worst <= 1e-12;
    const bool stuck = tr.outcome != Outcome::ConvergedToOrigin;
    rep.witnesses.push_back(Json{{"kind", "zero_path"}, {"s", s}, {"values", values},
                                 {"max_abs", worst}});
    rep.witnesses.push_back(Json{{"kind", "non_converging_trajectory"},
                                 {"z0", vec_json(z0)}, {"trajectory", to_json(tr)}});
    if (path_ok && stuck) return false;
    rep.notes.push_back("zero-path evidence incomplete");
    return std::nullopt;
  }

  // Neighbourhood of the origin: shells inside (-pi/2, pi/2)^n.
  const double radii[] = {0.05, 0.1, 0.2};
  const auto dirs = sphere_sample(ctx.dim, vc.shell_samples, part_seed(vc.seed, rep.id, 0));
  double min_value = std::numeric_limits<double>::infinity();
  double min_grad = std::numeric_limits<double>::infinity();
  double worst_pairing = 0.0;
  bool positive = true;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const Eigen::VectorXd z = dirs[k] * radii[k % 3];
    const double val = ev.value(z);
    const double g = ev.gradient(z).norm();
    min_value = std::min(min_value, val);
    min_grad = std::min(min_grad, g);
    if (!(val > 0.0) || !(g > 0.0)) positive = false;
    if (k < 100) {
      const auto [ts, half] = euler_pairing(th, z);
      worst_pairing = std::max(worst_pairing, std::abs(ts - half) / std::max(std::abs(ts), 1e-300));
    }
  }
  rep.heuristic_flags.push_back("sampled_local_positivity");
  rep.witnesses.push_back(Json{{"kind", "positivity_samples"},
                               {"count", dirs.size()},
                               {"radii", {0.05, 0.1, 0.2}},
                               {"min_value", min_value},
                               {"min_grad_norm", min_grad},
                               {"euler_pairing_max_rel", worst_pairing}});
  if (!positive) return false;
  if (worst_pairing > 1e-10) {
    rep.notes.push_back("Euler pairing disagreement above 1e-10");
    return std::nullopt;
  }

  const auto starts = shell(ctx.dim, vc.samples, 0.3, part_seed(vc.seed, rep.id, 1));
  const EnsembleStats st = run_ensemble(field_rhs(field), starts, orbit_config(vc, 3));
  rep.witnesses.push_back(Json{{"kind", "ensemble"}, {"radius", 0.3}, {"stats", st.to_json()}});
  return st.all_converged();
}

std::optional<bool> check_a(const Context& ctx, const VerifyConfig& vc, PartReport& rep,
                            const IdentityResults& ids) {
  rep.notes.push_back(
      "gadget potential is a sum of squares, so the unit ball is invariant (non-strictly) for "
      "every instance; the observed property is strict inward flow on the unit sphere, which "
      "holds iff V is positive definite");
  if (!ids.a_minus8p) {
    rep.notes.push_back("identity <2x,-grad p> = -8p failed");
    return std::nullopt;
  }
  if (!ctx.equilibria.empty()) {
    const BinaryPoint& xbar = ctx.equilibria.front();
    std::vector<Rational> xr(xbar.begin(), xbar.end());
    const Rational p_at = eval(ctx.v, xr);
    const Eigen::VectorXd u = to_vec(xbar).normalized();
    const Trajectory tr = integrate(ctx.f, u, physical_config(vc));
    rep.witnesses.push_back(Json{{"kind", "tangent_sphere_point"},
                                 {"point", vec_json(u)},
                                 {"p_exact", to_string(p_at)},
                                 {"vdot_exact", to_string(Rational(-8) * p_at)},
                                 {"trajectory", to_json(tr)}});
    if (p_at == 0 && tr.outcome == Outcome::Stationary) return false;
    return std::nullopt;
  }
  const SphereMinimum m = min_on_sphere(ctx.v, vc.restarts, part_seed(vc.seed, rep.id, 0));
  const FieldEvaluator fe(ctx.f);
  bool inward = true;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& x : sphere_sample(ctx.dim, vc.samples, part_seed(vc.seed, rep.id, 1))) {
    const double vdot = 2.0 * x.dot(fe(x));
    worst = std::max(worst, vdot);
    if (!(vdot < 0.0)) inward = false;
  }
  rep.heuristic_flags.push_back("multistart_sphere_minimum");
  rep.witnesses.push_back(Json{{"kind", "sphere_minimum"}, {"value", m.value},
                               {"argmin", vec_json(m.argmin)}});
  rep.witnesses.push_back(Json{{"kind", "boundary_samples"}, {"count", vc.samples},
                               {"max_vdot", worst}});
  if (m.value > vc.positivity_threshold && inward) return true;
  return false;
}

std::optional<bool> check_b(const Context& ctx, const VerifyConfig& vc, PartReport& rep,
                            const IdentityResults& ids) {
  if (!ids.b_minus4p) {
    rep.notes.push_back("identity <grad p,-x> = -4p failed");
    return std::nullopt;
  }
  const int n = ctx.dim;
  const VectorField neg = neg_identity_field(n);
  const Rhs forward_rhs = field_rhs(neg);
  const Rhs reversed_rhs = [](const Eigen::VectorXd& x) { return Eigen::VectorXd(x); };
  IntegratorConfig cfg = physical_config(vc);

  int forward_exits = 0, reversed_exits = 0, used = 0;
  double forward_max_p = 0.0;
  for (const auto& u : sphere_sample(n, vc.samples, part_seed(vc.seed, rep.id, 0))) {
    const double pu = ctx.v_real(u);
    if (pu <= 1e-12) continue;  // p vanishes on this ray: no boundary point
    const Eigen::VectorXd x0 = u / std::pow(pu, 0.25);
    ++used;
    const Trajectory forward = integrate(forward_rhs, x0, cfg);
    double max_p = 0.0;
    for (const auto& x : forward.states) max_p = std::max(max_p, ctx.v_real(x));
    forward_max_p = std::max(forward_max_p, max_p);
    if (max_p > 1.0 + 1e-9) ++forward_exits;

    IntegratorConfig short_cfg = cfg;
    short_cfg.t_max = 1.0;
    const Trajectory rev = integrate(reversed_rhs, x0, short_cfg);
    bool left = false;
    for (const auto& x : rev.states) left = left || ctx.v_real(x) > 1.0 + 1e-9;
    if (left) ++reversed_exits;
  }
  // p <= 0 everywhere would make the reversed flow leave S invariant; p(e_1)
  // is an exact counterexample for every gadget.
  std::vector<Rational> e1(n, Rational(0));
  e1[0] = 1;
  const Rational p_e1 = eval(ctx.v, e1);
  const bool forward_invariant = forward_exits == 0;
  rep.witnesses.push_back(Json{{"kind", "invariance_forward_mode"},
                               {"dynamics", "x' = -x"},
                               {"boundary_samples", used},
                               {"exits", forward_exits},
                               {"max_p_along_trajectories", forward_max_p},
                               {"invariant", forward_invariant}});
  rep.witnesses.push_back(Json{{"kind", "invariance_reversed_mode"},
                               {"dynamics", "x' = +x"},
                               {"boundary_samples", used},
                               {"exits", reversed_exits},
                               {"invariant", reversed_exits == 0},
                               {"predicted_invariant", p_e1 <= 0},
                               {"p_at_e1", to_string(p_e1)}});
  if (forward_invariant) rep.heuristic_flags.push_back("forward_mode_invariant_for_every_form");
  rep.notes.push_back(
      "along x' = -x, p(t) = exp(-4t) p(0), so {p <= 1} is invariant for every quartic form; the "
      "reversed mode x' = +x is reported alongside");
  if (used > 0 && (reversed_exits == 0) != (p_e1 <= 0)) {
    rep.notes.push_back("reversed mode disagrees with its prediction");
    return std::nullopt;
  }
  return forward_invariant;
}

std::optional<bool> ensemble_check(const Context& ctx, const VerifyConfig& vc, PartReport& rep,
                                   const VectorField& field, double radius, std::uint64_t stream) {
  const auto starts = shell(ctx.dim, vc.samples, radius, part_seed(vc.seed, rep.id, stream));
  const EnsembleStats st = run_ensemble(field_rhs(field), starts, orbit_config(vc, 3));
  rep.witnesses.push_back(Json{{"kind", "ensemble"}, {"radius", radius}, {"stats", st.to_json()}});
  return st.all_converged();
}

std::optional<bool> check_cd(const Context& ctx, const VerifyConfig& vc, PartReport& rep,
                             double radius) {
  if (ray_refutation(ctx, rep)) return false;
  if (!ctx.equilibria.empty()) return std::nullopt;
  return ensemble_check(ctx, vc, rep, ctx.f, radius, 0);
}

/// Largest r in {0.1, 0.05, ...} >= 1e-3 with sampled V-dot < 0 on |x| = r.
std::optional<double> local_decrease_radius(const Context& ctx, const FieldEvaluator& fe,
                                            const VerifyConfig& vc, PartId id) {
  for (double r = 0.1; r >= 1e-3; r *= 0.5) {
    if (vdot_negative_on_shell(ctx, fe, r, vc.samples * 10, part_seed(vc.seed, id, 7))) return r;
  }
  return std::nullopt;
}

std::optional<bool> check_e(const Context& ctx, const VerifyConfig& vc, PartReport& rep,
                            const IdentityResults& ids) {
  if (!ids.e_decomposition) {
    rep.notes.push_back("V-dot decomposition for f + x^4 failed");
    return std::nullopt;
  }
  const VectorField drift = with_quartic_drift(ctx.f);
  rep.notes.push_back(
      "Lyapunov stability is checked through the las-equivalent protocol: ray escape when the "
      "unperturbed field has binary equilibria, local V-dot < 0 plus convergence otherwise");
  if (!ctx.equilibria.empty()) {
    const Eigen::VectorXd xbar = to_vec(ctx.equilibria.front());
    const double alpha0 = 0.5;
    IntegratorConfig cfg = escape_config(vc);
    const Trajectory tr = integrate(drift, alpha0 * xbar, cfg);
    const double alpha_r = cfg.escape_radius / xbar.norm();
    const double analytic = (std::pow(alpha0, -3) - std::pow(alpha_r, -3)) / 3.0;
    const double dev = off_ray_deviation(tr, xbar);
    rep.witnesses.push_back(Json{{"kind", "ray_escape"},
                                 {"direction", ctx.equilibria.front()},
                                 {"alpha0", alpha0},
                                 {"trajectory", to_json(tr)},
                                 {"analytic_escape_time", analytic},
                                 {"off_ray_deviation", dev}});
    rep.notes.push_back("small-alpha starts are covered by the blow-up time 1/(3 alpha^3) on the "
                        "invariant ray; the simulation uses alpha = 0.5");
    if (tr.outcome == Outcome::Escaped && std::abs(tr.t_escape - analytic) < 1e-3 * analytic) {
      return false;
    }
    return std::nullopt;
  }
  const FieldEvaluator fe(drift);
  const auto r = local_decrease_radius(ctx, fe, vc, rep.id);
  rep.heuristic_flags.push_back("sampled_vdot_shell");
  if (!r) {
    rep.notes.push_back("no shell radius >= 1e-3 with sampled V-dot < 0");
    return std::nullopt;
  }
  rep.witnesses.push_back(Json{{"kind", "vdot_negative_shell"}, {"radius", *r}});
  return ensemble_check(ctx, vc, rep, drift, *r, 1);
}

std::optional<bool> check_f(const Context& ctx, const VerifyConfig& vc, PartReport& rep,
                            const IdentityResults& ids) {
  if (!ids.f_decomposition) {
    rep.notes.push_back("V-dot decomposition for f + x failed");
    return std::nullopt;
  }
  const VectorField drift = with_linear_drift(ctx.f);
  if (!ctx.equilibria.empty()) {
    const Eigen::VectorXd xbar = to_vec(ctx.equilibria.front());
    const double alpha0 = 0.5;
    IntegratorConfig cfg = escape_config(vc);
    const Trajectory tr = integrate(drift, alpha0 * xbar, cfg);
    const double analytic = std::log(cfg.escape_radius / (alpha0 * xbar.norm()));
    rep.witnesses.push_back(Json{{"kind", "ray_escape"},
                                 {"direction", ctx.equilibria.front()},
                                 {"alpha0", alpha0},
                                 {"trajectory", to_json(tr)},
                                 {"analytic_escape_time", analytic},
                                 {"off_ray_deviation", off_ray_deviation(tr, xbar)}});
    if (tr.outcome == Outcome::Escaped && std::abs(tr.t_escape - analytic) < 1e-3 * analytic) {
      return false;
    }
    return std::nullopt;
  }
  const FieldEvaluator fe(drift);
  std::optional<double> radius;
  for (double r = 1.0; r <= 256.0; r *= 2.0) {
    if (vdot_negative_on_shell(ctx, fe, r, vc.samples * 10, part_seed(vc.seed, rep.id, 0))) {
      radius = r;
      break;
    }
  }
  rep.heuristic_flags.push_back("sampled_vdot_shell");
  if (!radius) {
    rep.notes.push_back("no shell radius <= 256 with sampled V-dot < 0");
    return std::nullopt;
  }
  const int count = std::max(10, vc.samples / 10);
  const auto starts = shell(ctx.dim, count, 2.0 * *radius, part_seed(vc.seed, rep.id, 1));
  IntegratorConfig cfg = physical_config(vc);
  cfg.record = false;
  const EnsembleStats st = run_ensemble(field_rhs(drift), starts, cfg);
  rep.witnesses.push_back(Json{{"kind", "vdot_negative_outside"}, {"radius", *radius}});
  rep.witnesses.push_back(Json{{"kind", "ensemble"}, {"radius", 2.0 * *radius},
                               {"stats", st.to_json()}});
  if (st.escaped > 0) return false;
  if (st.errors > 0) return std::nullopt;
  return true;
}

std::optional<bool> check_g(const Context& ctx, const VerifyConfig& vc, PartReport& rep,
                            const IdentityResults& ids) {
  if (!ids.g_minus8v) {
    rep.notes.push_back("identity Wdot = -8V failed");
    return std::nullopt;
  }
  if (ray_refutation(ctx, rep)) return false;
  if (!ctx.equilibria.empty()) return std::nullopt;
  const SphereMinimum m = min_on_sphere(ctx.v, vc.restarts, part_seed(vc.seed, rep.id, 0));
  rep.heuristic_flags.push_back("multistart_sphere_minimum");
  rep.witnesses.push_back(Json{{"kind", "quadratic_lyapunov"},
                               {"W", "|x|^2"},
                               {"sphere_min_V", m.value},
                               {"argmin", vec_json(m.argmin)}});
  return m.value > vc.positivity_threshold;
}

std::optional<bool> check_h(const Context& ctx, const VerifyConfig& vc, PartReport& rep) {
  const Polytope poly = collision_polytope(ctx.dim);
  const VectorField drift = with_quartic_drift(ctx.f);
  const double eps = 1.0 / (2.0 * std::sqrt(static_cast<double>(ctx.dim)));
  rep.notes.push_back("ball radius 1/(2 sqrt(n)) keeps the ball disjoint from the polytope in every "
                      "dimension (minimum norm over the polytope is 1/sqrt(n))");
  if (!ctx.equilibria.empty()) {
    const BinaryPoint& xb = ctx.equilibria.front();
    int k = 0;
    for (int b : xb) k += b;
    std::vector<Rational> target(xb.size());
    for (std::size_t i = 0; i < xb.size(); ++i) target[i] = Rational(xb[i], k);
    const bool target_in = poly.contains(target);

    const Eigen::VectorXd xbar = to_vec(xb);
    const double alpha0 = 1.0 / (2.0 * k);
    IntegratorConfig cfg = orbit_config(vc, 3);
    cfg.record = true;
    cfg.max_step = 0.05;
    const Trajectory tr = integrate(drift, alpha0 * xbar, cfg);
    bool crossed = false;
    double t_cross = 0.0;
    for (std::size_t s = 0; s < tr.states.size() && !crossed; ++s) {
      if (poly.contains(tr.states[s], 1e-9)) {
        crossed = true;
        t_cross = tr.times[s];
      }
    }
    const bool start_outside = !poly.contains(Eigen::VectorXd(alpha0 * xbar));
    rep.witnesses.push_back(Json{{"kind", "ray_crossing"},
                                 {"direction", xb},
                                 {"target", "xbar / " + std::to_string(k)},
                                 {"target_in_polytope_exact", target_in},
                                 {"alpha0", alpha0},
                                 {"start_outside", start_outside},
                                 {"crossed", crossed},
                                 {"orbit_time_of_crossing", t_cross},
                                 {"trajectory", to_json(tr)}});
    if (target_in && start_outside && crossed) return false;
    return std::nullopt;
  }
  const FieldEvaluator fe(drift);
  const auto r = local_decrease_radius(ctx, fe, vc, PartId::E);
  rep.heuristic_flags.push_back("sampled_vdot_shell");
  if (!r) return std::nullopt;
  const double delta = std::min(*r, eps / 2.0);
  const auto starts = shell(ctx.dim, vc.samples, delta, part_seed(vc.seed, rep.id, 0));
  const EnsembleStats st = run_ensemble(field_rhs(drift), starts, orbit_config(vc, 3));
  rep.witnesses.push_back(Json{{"kind", "avoidance_ensemble"},
                               {"delta", delta},
                               {"epsilon", eps},
                               {"stats", st.to_json()}});
  if (st.max_norm >= eps || st.escaped > 0 || st.stationary > 0) return false;
  if (st.undecided + st.errors > 0) return std::nullopt;
  return true;
}

std::optional<bool> check_i(const Context& ctx, const VerifyConfig& vc, PartReport& rep) {
  const ControlSystem sys = control_gadget(ctx.inst);
  if (!ctx.equilibria.empty()) {
    if (!ray_refutation(ctx, rep)) return std::nullopt;
    const BinaryPoint& xb = ctx.equilibria.front();
    bool g_zero = true;
    for (const Rational& a : kRayAlphas) {
      std::vector<Rational> ax(xb.size());
      for (std::size_t i = 0; i < xb.size(); ++i) ax[i] = a * xb[i];
      g_zero = g_zero && eval(sys.g_scalar, ax) == 0;
    }
    rep.witnesses.push_back(Json{{"kind", "control_annihilated"},
                                 {"g_scalar_zero_on_ray_exact", g_zero}});
    if (g_zero) return false;
    return std::nullopt;
  }
  rep.notes.push_back("u = 0 stabilizes; verified with the part-c ensemble");
  return ensemble_check(ctx, vc, rep, sys.f, 1.0, 0);
}

PartReport run_part(const Context& ctx, PartId part, const VerifyConfig& vc,
                    const IdentityResults& ids) {
  const auto start = std::chrono::steady_clock::now();
  PartReport rep;
  rep.id = part;
  rep.oracle_sat = ctx.oracle.satisfiable;
  rep.oracle_witness = ctx.oracle.witness;
  // Part (b) is the only one whose property does not track satisfiability:
  // the gadget form is a sum of squares, hence nonnegative.
  rep.predicted = part == PartId::B ? true : !ctx.oracle.satisfiable;

  std::optional<bool> observed;
  try {
    switch (part) {
      case PartId::Thm1: observed = check_thm1(ctx, vc, rep); break;
      case PartId::A: observed = check_a(ctx, vc, rep, ids); break;
      case PartId::B: observed = check_b(ctx, vc, rep, ids); break;
      case PartId::C: observed = check_cd(ctx, vc, rep, 1.0); break;
      case PartId::D: observed = check_cd(ctx, vc, rep, 0.1); break;
      case PartId::E: observed = check_e(ctx, vc, rep, ids); break;
      case PartId::F: observed = check_f(ctx, vc, rep, ids); break;
      case PartId::G: observed = check_g(ctx, vc, rep, ids); break;
      case PartId::H: observed = check_h(ctx, vc, rep); break;
      case PartId::I: observed = check_i(ctx, vc, rep); break;
    }
  } catch (const IntegrationError& e) {
    rep.notes.push_back(std::string("integration error: ") + e.what());
    observed.reset();
  }
  rep.observed_property = observed;

  // A failed exact sub-check is a failure, never inconclusive.
  bool exact_failure = false;
  for (const std::string& note : rep.notes) {
    if (note.find("failed") != std::string::npos) exact_failure = true;
  }
  if (exact_failure) {
    rep.observed = Verdict::Fail;
  } else if (!observed) {
    rep.observed = Verdict::Inconclusive;
  } else {
    rep.observed = *observed == rep.predicted ? Verdict::Pass : Verdict::Fail;
  }
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace

PartReport verify_part(const Instance& inst, PartId part, const VerifyConfig& cfg) {
  const Context ctx(inst);
  const IdentityResults ids = identity_suite_for(ctx.v);
  return run_part(ctx, part, cfg, ids);
}

SuiteReport verify_suite(const Instance& inst, const std::vector<PartId>& parts,
                         const VerifyConfig& cfg) {
  const Context ctx(inst);
  SuiteReport rep;
  rep.instance_o3s = format_instance(inst);
  rep.oracle = ctx.oracle;
  rep.identities = identity_suite_for(ctx.v);
  rep.config = cfg;
  for (PartId p : parts) rep.parts.push_back(run_part(ctx, p, cfg, rep.identities));
  return rep;
}

std::size_t SuiteReport::fail_count() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.observed == Verdict::Fail ? 1 : 0;
  return n;
}

std::size_t SuiteReport::inconclusive_count() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.observed == Verdict::Inconclusive ? 1 : 0;
  return n;
}

// --- oracle crosscheck ----------------------------------------------------

CrosscheckSummary oracle_crosscheck(const std::vector<Instance>& family, std::uint64_t seed,
                                    int restarts) {
  CrosscheckSummary out;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const Instance& inst = family[k];
    const SatResult sat = brute_force(inst);
    const Polynomial v = build_V(inst);
    const auto eq = scan_binary_equilibria(gradient_descent_field(v));
    std::vector<Eigen::VectorXd> witness_starts;
    for (const BinaryPoint& p : eq) witness_starts.push_back(to_vec(p));
    const SphereMinimum m = min_on_sphere(v, restarts, seed + k, witness_starts);

    CrosscheckRow row;
    row.sat = sat.satisfiable;
    row.equilibria_nonempty = !eq.empty();
    row.sphere_min = m.value;
    row.positive_by_sampling = m.value > 1e-6;
    out.rows.push_back(row);
    out.confusion[row.sat ? 1 : 0][row.equilibria_nonempty ? 1 : 0] += 1;
    const bool heuristic_ok = row.sat ? m.value <= 1e-8 : row.positive_by_sampling;
    if (!heuristic_ok) ++out.mismatches;
  }
  return out;
}

// --- JSON and text rendering ----------------------------------------------

Json to_json(const IdentityResults& r) {
  auto deg = [](const std::optional<int>& d) { return d ? Json(*d) : Json(nullptr); };
  return Json{{"a_minus8p", r.a_minus8p},
              {"b_minus4p", r.b_minus4p},
              {"e_decomposition", r.e_decomposition},
              {"e_degrees", {deg(r.e_degrees[0]), deg(r.e_degrees[1])}},
              {"f_decomposition", r.f_decomposition},
              {"f_degrees", {deg(r.f_degrees[0]), deg(r.f_degrees[1])}},
              {"g_minus8V", r.g_minus8v},
              {"all", r.all()}};
}

Json to_json(const PartReport& r) {
  Json out{{"id", to_string(r.id)},
           {"predicted", r.predicted},
           {"observed_property", r.observed_property ? Json(*r.observed_property) : Json(nullptr)},
           {"observed", to_string(r.observed)},
           {"witnesses", r.witnesses},
           {"heuristic_flags", r.heuristic_flags},
           {"notes", r.notes},
           {"seconds", r.seconds}};
  return out;
}

Json to_json(const SuiteReport& r) {
  Json parts = Json::array();
  for (const auto& p : r.parts) parts.push_back(to_json(p));
  Json oracle{{"satisfiable", r.oracle.satisfiable}};
  if (r.oracle.satisfiable) oracle["witness"] = assignment_string(r.oracle.witness);
  return Json{{"instance", r.instance_o3s},
              {"oracle", oracle},
              {"config",
               {{"seed", r.config.seed},
                {"samples", r.config.samples},
                {"shell_samples", r.config.shell_samples},
                {"restarts", r.config.restarts},
                {"t_max", r.config.t_max},
                {"positivity_threshold", r.config.positivity_threshold}}},
              {"parts", parts},
              {"identities", to_json(r.identities)},
              {"fail_cells", r.fail_count()},
              {"inconclusive_cells", r.inconclusive_count()}};
}

std::string render_report(const Json& suite) {
  std::ostringstream os;
  const Json& oracle = suite.at("oracle");
  os << "oracle: " << (oracle.at("satisfiable").get<bool>() ? "SAT" : "UNSAT");
  if (oracle.contains("witness")) os << ' ' << oracle.at("witness").get<std::string>();
  os << "    seed: " << suite.at("config").at("seed") << '\n';
  os << "identities:";
  for (const auto& [k, v] : suite.at("identities").items()) {
    if (v.is_boolean()) os << ' ' << k << '=' << (v.get<bool>() ? "ok" : "FAILED");
  }
  os << "\n\n";
  os << std::left << std::setw(6) << "part" << std::setw(11) << "predicted" << std::setw(10)
     << "observed" << std::setw(14) << "verdict" << std::setw(9) << "seconds" << "flags\n";
  auto tf = [](const Json& v) -> std::string {
    if (v.is_null()) return "-";
    return v.get<bool>() ? "true" : "false";
  };
  for (const Json& p : suite.at("parts")) {
    std::string flags;
    for (const Json& f : p.at("heuristic_flags")) flags += (flags.empty() ? "" : ",") + f.get<std::string>();
    std::ostringstream secs;
    secs << std::fixed << std::setprecision(2) << p.at("seconds").get<double>();
    os << std::left << std::setw(6) << p.at("id").get<std::string>() << std::setw(11)
       << tf(p.at("predicted")) << std::setw(10) << tf(p.at("observed_property")) << std::setw(14)
       << p.at("observed").get<std::string>() << std::setw(9) << secs.str() << flags << '\n';
  }
  os << "\nfail cells: " << suite.at("fail_cells") << "  inconclusive: "
     << suite.at("inconclusive_cells") << '\n';
  return os.str();
}

}  // namespace gadget_forge
