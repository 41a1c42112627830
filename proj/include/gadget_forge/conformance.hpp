#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gadget_forge/flowsim.hpp"
#include "gadget_forge/json_io.hpp"
#include "gadget_forge/satcore.hpp"

namespace gadget_forge {

enum class PartId { Thm1, A, B, C, D, E, F, G, H, I };

inline constexpr PartId kAllParts[] = {PartId::Thm1, PartId::A, PartId::B, PartId::C, PartId::D,
                                       PartId::E,    PartId::F, PartId::G, PartId::H, PartId::I};

std::string to_string(PartId p);
PartId part_from_string(const std::string& s);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

/// Exact outcomes of the symbolic proof identities for p = V = build_V(inst).
struct IdentityResults {
  bool a_minus8p = false;       // <2x, -grad p> + 8p == 0
  bool b_minus4p = false;       // <grad p, -x> + 4p == 0
  bool e_decomposition = false; // Vdot along f + x^4 == -|grad V|^2 + <grad V, x^4>
  bool f_decomposition = false; // Vdot along f + x   == -|grad V|^2 + <grad V, x>
  bool g_minus8v = false;       // Wdot + 8V == 0 with W = |x|^2
  std::optional<int> e_degrees[2];
  std::optional<int> f_degrees[2];

  /// Every identity holds and the degree audit reads (6, 7) and (6, 4).
  bool all() const;
};

IdentityResults identity_suite(const Instance& inst);
IdentityResults identity_suite_for(const Polynomial& v);
/// Identities for potential v against a given gradient field f (normally
/// gradient_descent_field(v)). A potential that drifts from its field breaks
/// identity (i).
IdentityResults identity_suite_for(const Polynomial& v, const VectorField& f);

struct VerifyConfig {
  std::uint64_t seed = 0;
  /// Trajectories per ensemble and boundary samples per check.
  int samples = 100;
  /// Neighbourhood samples for the trigonometric positivity check.
  int shell_samples = 10000;
  int restarts = 24;
  double t_max = 50.0;
  double positivity_threshold = 1e-6;
};

struct PartReport {
  PartId id = PartId::Thm1;
  bool oracle_sat = false;
  Assignment oracle_witness;
  /// Truth value of the part's property as predicted from the oracle.
  bool predicted = false;
  /// What the checks observed; empty when inconclusive.
  std::optional<bool> observed_property;
  Verdict observed = Verdict::Inconclusive;
  Json witnesses = Json::array();
  std::vector<std::string> heuristic_flags;
  std::vector<std::string> notes;
  double seconds = 0.0;
};

struct SuiteReport {
  std::string instance_o3s;
  SatResult oracle;
  std::vector<PartReport> parts;
  IdentityResults identities;
  VerifyConfig config;

  std::size_t fail_count() const;
  std::size_t inconclusive_count() const;
};

PartReport verify_part(const Instance& inst, PartId part, const VerifyConfig& cfg);
SuiteReport verify_suite(const Instance& inst, const std::vector<PartId>& parts,
                         const VerifyConfig& cfg);

struct CrosscheckRow {
  bool sat = false;
  bool equilibria_nonempty = false;
  double sphere_min = 0.0;
  bool positive_by_sampling = false;
};

struct CrosscheckSummary {
  std::vector<CrosscheckRow> rows;
  /// confusion[oracle_sat][gadget_says_sat]
  std::size_t confusion[2][2] = {{0, 0}, {0, 0}};
  std::size_t mismatches = 0;

  bool diagonal() const { return confusion[0][1] == 0 && confusion[1][0] == 0 && mismatches == 0; }
};

/// Per instance: sat <=> exact binary-equilibrium scan nonempty; unsat =>
/// sampled sphere minimum of V above 1e-6; sat => sphere minimum below 1e-8.
CrosscheckSummary oracle_crosscheck(const std::vector<Instance>& family, std::uint64_t seed = 0,
                                    int restarts = 16);

Json to_json(const IdentityResults& r);
Json to_json(const PartReport& r);
Json to_json(const SuiteReport& r);

/// Plain-text table of a SuiteReport JSON document.
std::string render_report(const Json& suite);

}  // namespace gadget_forge
