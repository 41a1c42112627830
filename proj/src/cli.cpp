#include "gadget_forge/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gadget_forge/conformance.hpp"

namespace gadget_forge::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance load_instance(const std::string& path) { return parse_instance(read_file(path)); }

Json load_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ContractError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// Writes to --out when given, otherwise to the default stream.
void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw ContractError("cannot write '" + out_path + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json reduce_target(const Instance& inst, const std::string& target) {
  Json out{{"target", target}, {"n_vars", inst.n_vars()}};
  auto with = [&](const char* key, Json value) {
    out[key] = std::move(value);
    return out;
  };
  if (target == "t") return with("potential", to_json(build_t(inst)));
  if (target == "th") return with("potential", to_json(build_th(inst)));
  if (target == "V") return with("potential", to_json(build_V(inst)));
  if (target == "thm1") return with("field", to_json(trig_gradient_field(build_th(inst))));

  const Polynomial v = build_V(inst);
  const VectorField f = gradient_descent_field(v);
  if (target == "a" || target == "c" || target == "d" || target == "g") {
    return with("field", to_json(f));
  }
  if (target == "b") {
    with("field", to_json(neg_identity_field(v.n_vars())));
    return with("set", to_json(quartic_set(v)));
  }
  if (target == "e") return with("field", to_json(with_quartic_drift(f)));
  if (target == "f") return with("field", to_json(with_linear_drift(f)));
  if (target == "h") {
    with("field", to_json(with_quartic_drift(f)));
    return with("polytope", to_json(collision_polytope(v.n_vars())));
  }
  if (target == "i") {
    const Json sys = to_json(control_gadget(inst));
    for (const auto& [k, val] : sys.items()) out[k] = val;
    return out;
  }
  throw ContractError("unknown target '" + target + "'");
}

Eigen::VectorXd parse_csv_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ContractError("--x0: '" + tok + "' is not a number");
    }
  }
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os.precision(17);
  const Eigen::Index n = tr.states.empty() ? 0 : tr.states.front().size();
  os << 't';
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i + 1;
  os << '\n';
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    os << tr.times[k];
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << tr.states[k][i];
    os << '\n';
  }
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ONE-IN-THREE 3SAT gadget generator and checker", "gadget-forge"};
  app.require_subcommand(1);
  std::string out_path;

  auto* gen = app.add_subcommand("gen", "Generate a random o3s instance");
  int gen_n = 5, gen_m = 5;
  std::uint64_t gen_seed = 0;
  gen->add_option("--n", gen_n, "Number of variables")->required();
  gen->add_option("--m", gen_m, "Number of clauses")->required();
  gen->add_option("--seed", gen_seed, "RNG seed");

  auto* solve = app.add_subcommand("solve", "Brute-force an instance; exit 0 if SAT, 1 if UNSAT");
  std::string solve_file;
  solve->add_option("file", solve_file, "o3s instance")->required();

  auto* reduce = app.add_subcommand("reduce", "Emit a gadget as JSON");
  std::string reduce_file, target;
  reduce->add_option("file", reduce_file, "o3s instance")->required();
  reduce->add_option("--target", target, "Gadget to build")
      ->required()
      ->check(CLI::IsMember({"t", "th", "V", "thm1", "a", "b", "c", "d", "e", "f", "g", "h", "i"}));

  auto* simulate = app.add_subcommand("simulate", "Integrate a vector field; trajectory as CSV");
  std::string field_file, x0_text;
  double tmax = 50.0, tol = 1e-8;
  bool orbit = false;
  simulate->add_option("field", field_file, "Field JSON (reduce output or a bare field)")
      ->required();
  simulate->add_option("--x0", x0_text, "Initial state, comma separated")->required();
  simulate->add_option("--tmax", tmax, "Time horizon");
  simulate->add_option("--tol", tol, "Relative tolerance (absolute tolerance is tol/100)");
  simulate->add_flag("--orbit", orbit, "Use orbit time scaling");

  auto* verify = app.add_subcommand("verify", "Run conformance checks; exit 0 iff no fail cells");
  std::string verify_file, part = "all";
  VerifyConfig vc;
  verify->add_option("file", verify_file, "o3s instance")->required();
  verify->add_option("--part", part, "all, thm1 or a..i")
      ->check(CLI::IsMember({"all", "thm1", "a", "b", "c", "d", "e", "f", "g", "h", "i"}));
  verify->add_option("--seed", vc.seed, "Sampling seed");
  verify->add_option("--samples", vc.samples, "Trajectories per ensemble")
      ->check(CLI::PositiveNumber);
  verify->add_option("--tmax", vc.t_max, "Integration horizon")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Render a verify JSON report as a table");
  std::string report_file;
  report->add_option("file", report_file, "Suite JSON")->required();

  for (CLI::App* sub : {gen, solve, reduce, simulate, verify, report}) {
    sub->add_option("--out", out_path, "Write output to this file instead of stdout");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }

  try {
    if (*gen) {
      const Instance inst = random_instance(gen_n, gen_m, gen_seed);
      std::ostringstream os;
      os << "c seed " << gen_seed << '\n' << format_instance(inst);
      emit(os.str(), out_path, out);
      return kOk;
    }
    if (*solve) {
      const SatResult r = brute_force(load_instance(solve_file));
      emit(r.satisfiable ? "SAT " + assignment_string(r.witness) + "\n" : "UNSAT\n", out_path, out);
      return r.satisfiable ? kOk : kNegative;
    }
    if (*reduce) {
      emit(dump(reduce_target(load_instance(reduce_file), target)), out_path, out);
      return kOk;
    }
    if (*simulate) {
      const VectorField field = field_from_json(load_json(field_file));
      const Eigen::VectorXd x0 = parse_csv_vector(x0_text);
      IntegratorConfig cfg;
      cfg.t_max = tmax;
      cfg.rel_tol = tol;
      cfg.abs_tol = tol * 1e-2;
      if (orbit) {
        cfg.time_scaling = TimeScaling::Orbit;
        cfg.stationary_degree = field.homogeneous_degree().value_or(0);
      }
      cfg.validate();
      Trajectory tr;
      Json summary;
      try {
        tr = integrate(field, x0, cfg);
        summary = to_json(tr);
      } catch (const IntegrationError& e) {
        tr = e.partial();
        summary = to_json(tr);
        summary["error"] = e.what();
      }
      summary["config"] = to_json(cfg);
      emit(trajectory_csv(tr), out_path, out);
      if (out_path.empty()) {
        err << summary.dump() << '\n';
      } else {
        emit(dump(summary), out_path + ".outcome.json", out);
      }
      return summary.contains("error") ? kError : kOk;
    }
    if (*verify) {
      const Instance inst = load_instance(verify_file);
      std::vector<PartId> parts;
      if (part == "all") {
        parts.assign(std::begin(kAllParts), std::end(kAllParts));
      } else {
        parts.push_back(part_from_string(part));
      }
      const SuiteReport rep = verify_suite(inst, parts, vc);
      emit(dump(to_json(rep)), out_path, out);
      return rep.fail_count() == 0 ? kOk : kNegative;
    }
    if (*report) {
      emit(render_report(load_json(report_file)), out_path, out);
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what() << '\n';
    return kError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON record: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace gadget_forge::cli
