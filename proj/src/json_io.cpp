#include "gadget_forge/json_io.hpp"

#include <cmath>

namespace gadget_forge {

namespace {

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ContractError(std::string("JSON record is missing \"") + key + "\"");
  }
  return j.at(key);
}

}  // namespace

Json to_json(const Rational& r) {
  return Json{{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}};
}

Rational rational_from_json(const Json& j) {
  try {
    Rational r(mpz_class(field(j, "num").get<std::string>()),
               mpz_class(field(j, "den").get<std::string>()));
    if (r.get_den() == 0) throw ContractError("zero denominator");
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ContractError("rational fields must be decimal integer strings");
  }
}

Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) {
    terms.push_back(Json{{"exp", e}, {"num", c.get_num().get_str()}, {"den", c.get_den().get_str()}});
  }
  return Json{{"n_vars", p.n_vars()}, {"terms", std::move(terms)}};
}

Polynomial polynomial_from_json(const Json& j) {
  const int n = field(j, "n_vars").get<int>();
  Polynomial p(n);
  for (const Json& t : field(j, "terms")) {
    auto e = field(t, "exp").get<Exponents>();
    if (static_cast<int>(e.size()) != n) throw DimensionError("term exponent length != n_vars");
    p.add_term(e, rational_from_json(t));
  }
  return p;
}

Json to_json(const TrigPolynomial& t) {
  return Json{{"kind", "trig"}, {"inner", to_json(t.inner())}};
}

TrigPolynomial trig_from_json(const Json& j) {
  if (field(j, "kind") != "trig") throw ContractError("expected a trig polynomial record");
  return TrigPolynomial(polynomial_from_json(field(j, "inner")));
}

Json to_json(const VectorField& f) {
  if (f.is_trig()) {
    return Json{{"kind", to_string(f.kind())}, {"potential", to_json(f.trig_potential())}};
  }
  Json comps = Json::array();
  for (const Polynomial& c : f.components()) comps.push_back(to_json(c));
  Json out{{"kind", to_string(f.kind())}, {"n", f.n()}, {"components", std::move(comps)}};
  if (f.potential()) out["potential"] = to_json(*f.potential());
  return out;
}

VectorField field_from_json(const Json& j) {
  // Gadget bundles wrap the field under "field".
  if (j.is_object() && j.contains("field") && !j.contains("kind")) {
    return field_from_json(j.at("field"));
  }
  if (j.is_object() && j.contains("f") && j.contains("g_scalar")) return field_from_json(j.at("f"));
  const FieldKind kind = field_kind_from_string(field(j, "kind").get<std::string>());
  if (kind == FieldKind::TrigGradientDescent) {
    return VectorField(trig_from_json(field(j, "potential")));
  }
  std::vector<Polynomial> comps;
  for (const Json& c : field(j, "components")) comps.push_back(polynomial_from_json(c));
  if (static_cast<int>(comps.size()) != field(j, "n").get<int>()) {
    throw DimensionError("component count != n");
  }
  std::optional<Polynomial> potential;
  if (j.contains("potential")) potential = polynomial_from_json(j.at("potential"));
  return VectorField(kind, std::move(comps), std::move(potential));
}

Json to_json(const SemialgebraicSet& s) {
  return Json{{"kind", "SemialgebraicSet"}, {"p", to_json(s.p)}, {"level", to_json(s.level)}};
}

Json to_json(const Polytope& p) {
  Json hs = Json::array();
  for (const Halfspace& h : p.halfspaces) {
    Json normal = Json::array();
    for (const Rational& a : h.normal) normal.push_back(to_json(a));
    hs.push_back(Json{{"normal", std::move(normal)}, {"offset", to_json(h.offset)}});
  }
  return Json{{"kind", "Polytope"}, {"n", p.n}, {"halfspaces", std::move(hs)}};
}

Json to_json(const ControlSystem& c) {
  return Json{{"kind", "ControlSystem"},
              {"f", to_json(c.f)},
              {"g_scalar", to_json(c.g_scalar)},
              {"g_structure", "g_scalar(x) * ones * ones^T"}};
}

Json to_json(const IntegratorConfig& cfg) {
  return Json{{"initial_step", cfg.initial_step},
              {"rel_tol", cfg.rel_tol},
              {"abs_tol", cfg.abs_tol},
              {"t_max", cfg.t_max},
              {"escape_radius", cfg.escape_radius},
              {"convergence_radius", cfg.convergence_radius},
              {"max_step", std::isfinite(cfg.max_step) ? Json(cfg.max_step) : Json(nullptr)},
              {"stall_window", cfg.stall_window},
              {"stationary_tol", cfg.stationary_tol},
              {"stationary_degree", cfg.stationary_degree},
              {"time_scaling", cfg.time_scaling == TimeScaling::Orbit ? "orbit" : "physical"}};
}

Json to_json(const Trajectory& tr) {
  Json out{{"outcome", to_string(tr.outcome)},
           {"t_end", tr.t_end},
           {"accepted_steps", tr.accepted_steps},
           {"rejected_steps", tr.rejected_steps},
           {"max_norm", tr.max_norm},
           {"final_state", vector_json(tr.final_state)}};
  if (tr.outcome == Outcome::Escaped) out["t_escape"] = tr.t_escape;
  if (tr.outcome == Outcome::Stationary) out["stationary_point"] = vector_json(tr.final_state);
  return out;
}

}  // namespace gadget_forge
