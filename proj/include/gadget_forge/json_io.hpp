#pragma once

#include <json.hpp>

#include "gadget_forge/flowsim.hpp"
#include "gadget_forge/gadgets.hpp"

namespace gadget_forge {

// Output uses insertion-ordered objects so that files are byte-stable.
using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

/// {"n_vars": k, "terms": [{"exp": [...], "num": "...", "den": "..."}]},
/// terms in canonical graded-lex order.
Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

/// {"kind": "trig", "inner": <polynomial>}
Json to_json(const TrigPolynomial& t);
TrigPolynomial trig_from_json(const Json& j);

/// {"kind": ..., "n": n, "components": [...]} or, for the trig kind,
/// {"kind": "TrigGradientDescent", "potential": <trig>}.
Json to_json(const VectorField& f);
VectorField field_from_json(const Json& j);

Json to_json(const SemialgebraicSet& s);
Json to_json(const Polytope& p);
Json to_json(const ControlSystem& c);

Json to_json(const IntegratorConfig& cfg);
Json to_json(const Trajectory& tr);  // outcome summary, no samples

}  // namespace gadget_forge
