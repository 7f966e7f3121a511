#include "slhkit/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "slhkit/component_lib.hpp"
#include "slhkit/errors.hpp"
#include "slhkit/gj_parse.hpp"
#include "slhkit/master_eq.hpp"
#include "slhkit/netlist.hpp"
#include "slhkit/netlist_rewrite.hpp"
#include "slhkit/op_parse.hpp"
#include "slhkit/slh_json.hpp"

namespace slh::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UserError("cannot write " + path);
  file << text;
}

// Parses the connection designator "X.outI>Y.inJ" (long port names are also
// accepted: "X.outputI>Y.inputJ").
Connection parse_connection_spec(const std::string& text) {
  auto fail = [&]() -> Connection {
    throw UserError("bad connection designator '" + text +
                    "' (expected X.outI>Y.inJ)");
  };
  auto split_port = [&](const std::string& part, bool is_from) -> PortRef {
    std::size_t dot = part.find('.');
    if (dot == std::string::npos || dot == 0) fail();
    PortRef ref;
    ref.instance = part.substr(0, dot);
    std::string port = part.substr(dot + 1);
    const std::string long_name = is_from ? "output" : "input";
    const std::string short_name = is_from ? "out" : "in";
    std::string digits;
    if (port.rfind(long_name, 0) == 0) {
      digits = port.substr(long_name.size());
    } else if (port.rfind(short_name, 0) == 0) {
      digits = port.substr(short_name.size());
    } else {
      fail();
    }
    if (digits.empty() ||
        digits.find_first_not_of("0123456789") != std::string::npos) {
      fail();
    }
    ref.dir = is_from ? PortDir::output : PortDir::input;
    ref.index = std::stoi(digits);
    if (ref.index < 1) fail();
    return ref;
  };

  std::size_t gt = text.find('>');
  if (gt == std::string::npos) fail();
  Connection c;
  c.from = split_port(text.substr(0, gt), true);
  c.to = split_port(text.substr(gt + 1), false);
  return c;
}

ParamExpr parse_param_spec(const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size()) return ParamExpr::value(v);
  } catch (const std::exception&) {
  }
  if (text.empty()) throw UserError("empty parameter value");
  return ParamExpr::symbol(text);
}

Netlist load_netlist(const std::string& path, const ComponentLibrary& lib,
                     std::ostream& err) {
  Netlist nl = parse_netlist(read_file(path));
  std::vector<Diagnostic> problems = validate(nl, lib);
  if (!problems.empty()) {
    for (const auto& d : problems) {
      err << path << ":";
      if (d.loc.line > 0) err << d.loc.line << ":" << d.loc.col << ":";
      err << " error: " << d.message << "\n";
    }
    throw UserError("netlist failed validation with " +
                    std::to_string(problems.size()) + " problem(s)");
  }
  return nl;
}

std::string render_slh_text(const SLHTriple& t) {
  std::ostringstream os;
  os << "S (" << t.n_out << "x" << t.n_in << "):\n";
  for (int r = 0; r < t.n_out; ++r) {
    for (int c = 0; c < t.n_in; ++c) {
      os << "  S[" << (r + 1) << "][" << (c + 1) << "] = " << t.s(r, c).str()
         << "\n";
    }
  }
  os << "L (" << t.n_out << "):\n";
  for (int k = 0; k < t.n_out; ++k) {
    os << "  L[" << (k + 1) << "] = " << t.L[static_cast<std::size_t>(k)].str()
       << "\n";
  }
  os << "H = " << t.H.str() << "\n";
  return os.str();
}

Complex parse_binding_value(const std::string& text) {
  // "a", "a+bi", "a-bi", or "bi" with a, b decimal literals.
  std::size_t used = 0;
  double re = 0.0;
  try {
    re = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UserError("bad numeric binding '" + text + "'");
  }
  if (used == text.size()) return Complex(re, 0.0);
  std::string rest = text.substr(used);
  if (rest == "i") return Complex(0.0, re);  // pure imaginary "2i"
  double im = 0.0;
  try {
    std::size_t used2 = 0;
    im = std::stod(rest, &used2);
    rest = rest.substr(used2);
  } catch (const std::exception&) {
    throw UserError("bad numeric binding '" + text + "'");
  }
  if (rest != "i") throw UserError("bad numeric binding '" + text + "'");
  return Complex(re, im);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"quantum photonic circuit toolkit"};
  app.require_subcommand(1);

  ComponentLibrary lib = ComponentLibrary::builtins();
  std::string manifest_path;
  app.add_option("--components", manifest_path,
                 "JSON manifest of additional component models");

  // ---- parse ----
  auto* cmd_parse = app.add_subcommand("parse", "validate and echo a netlist");
  cmd_parse->fallthrough();
  std::string parse_in;
  cmd_parse->add_option("input", parse_in, "netlist file (.pnl)")->required();

  // ---- add-loss ----
  auto* cmd_loss =
      app.add_subcommand("add-loss", "splice loss taps into every connection");
  cmd_loss->fallthrough();
  std::string loss_in, loss_out, loss_theta = "theta";
  std::vector<std::string> loss_excludes, loss_overrides;
  cmd_loss->add_option("input", loss_in, "netlist file (.pnl)")->required();
  cmd_loss->add_option("--theta", loss_theta, "loss parameter (symbol or number)");
  cmd_loss->add_option("--exclude", loss_excludes,
                       "connection X.outI>Y.inJ to leave untouched");
  cmd_loss->add_option("--override", loss_overrides,
                       "per-connection parameter X.outI>Y.inJ=value");
  cmd_loss->add_option("-o,--output", loss_out, "output netlist path");

  // ---- to-gj ----
  auto* cmd_togj =
      app.add_subcommand("to-gj", "convert a netlist to a circuit-algebra term");
  cmd_togj->fallthrough();
  std::string togj_in;
  bool togj_trace = false;
  cmd_togj->add_option("input", togj_in, "netlist file (.pnl)")->required();
  cmd_togj->add_flag("--trace", togj_trace, "print the step/score table");

  // ---- reduce ----
  auto* cmd_reduce =
      app.add_subcommand("reduce", "reduce a netlist to a single (S,L,H) triple");
  cmd_reduce->fallthrough();
  std::string reduce_in, reduce_out, reduce_format = "text", reduce_term;
  cmd_reduce->add_option("input", reduce_in, "netlist file (.pnl)")->required();
  cmd_reduce->add_option("--format", reduce_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd_reduce->add_option("--term", reduce_term,
                         "circuit-algebra term to reduce instead of the "
                         "greedy parse (instances from the netlist)");
  cmd_reduce->add_option("-o,--output", reduce_out, "output path");

  // ---- simulate ----
  auto* cmd_sim = app.add_subcommand(
      "simulate", "integrate the master equation of a reduced model");
  cmd_sim->fallthrough();
  std::string sim_in, sim_out, sim_fidelity, sim_initial, sim_method = "rk4";
  std::vector<std::string> sim_bindings, sim_observables;
  double sim_t_final = 1.0, sim_dt = 1e-3;
  int sim_stride = 1;
  cmd_sim->add_option("input", sim_in, "reduced model (.json)")->required();
  cmd_sim->add_option("--bind", sim_bindings, "symbol binding name=value");
  cmd_sim->add_option("--t-final", sim_t_final, "integration horizon")
      ->required();
  cmd_sim->add_option("--dt", sim_dt, "step size (rk4) or initial step (rk45)");
  cmd_sim->add_option("--method", sim_method, "rk4 or rk45")
      ->check(CLI::IsMember({"rk4", "rk45"}));
  cmd_sim->add_option("--stride", sim_stride, "record every n-th step");
  cmd_sim->add_option("--fidelity", sim_fidelity,
                      "ket specification; used as the initial state and "
                      "tracked as a fidelity column");
  cmd_sim->add_option("--initial", sim_initial,
                      "initial ket when different from --fidelity");
  cmd_sim->add_option("--observable", sim_observables,
                      "extra observable column name=operator");
  cmd_sim->add_option("-o,--output", sim_out, "trajectory CSV path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends print through CLI11's own channel.
      std::ostringstream help;
      int code = app.exit(e, help, help);
      out << help.str();
      return code;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (!manifest_path.empty()) lib.load_manifest(read_file(manifest_path));

  if (cmd_parse->parsed()) {
    Netlist nl = load_netlist(parse_in, lib, err);
    out << serialize_netlist(nl);
    return 0;
  }

  if (cmd_loss->parsed()) {
    Netlist nl = load_netlist(loss_in, lib, err);
    LossAssignment la;
    la.default_theta = parse_param_spec(loss_theta);
    for (const std::string& spec : loss_excludes) {
      la.exclude.push_back(parse_connection_spec(spec));
    }
    for (const std::string& spec : loss_overrides) {
      std::size_t eq = spec.rfind('=');
      if (eq == std::string::npos) {
        throw UserError("bad override '" + spec + "' (expected conn=value)");
      }
      la.overrides.emplace_back(parse_connection_spec(spec.substr(0, eq)),
                                parse_param_spec(spec.substr(eq + 1)));
    }
    auto [rewritten, report] = insert_losses(nl, la);
    write_output(loss_out, serialize_netlist(rewritten), out);
    err << "inserted " << report.inserted.size() << " loss component(s)\n";
    return 0;
  }

  if (cmd_togj->parsed()) {
    Netlist nl = load_netlist(togj_in, lib, err);
    ParseResult pr = netlist_to_term(nl, lib);
    out << pretty_print(pr.term) << "\n";
    if (togj_trace) out << "\n" << format_trace(pr.trace);
    return 0;
  }

  if (cmd_reduce->parsed()) {
    Netlist nl = load_netlist(reduce_in, lib, err);
    std::ostringstream text;
    if (reduce_term.empty()) {
      ReducedModel model = reduce_netlist(nl, lib);
      if (reduce_format == "json") {
        write_output(reduce_out, reduced_model_to_json(model), out);
      } else {
        ParseResult pr = netlist_to_term(nl, lib);
        text << "term: " << pretty_print(pr.term) << "\n";
        text << render_slh_text(model.slh);
        write_output(reduce_out, text.str(), out);
      }
      return 0;
    }
    // Reduce a hand-written term against the netlist's instances.
    CircuitTerm term = parse_term(reduce_term, [&](const std::string& name) {
      const ComponentDecl* decl = nl.find_decl(name);
      if (!decl) throw UserError("unknown instance in term: " + name);
      PortProfile p = lib.profile(*decl);
      return Arity{p.full_in, p.full_out};
    });
    std::map<std::string, InstantiatedComponent> built;
    std::vector<LocalSpace> spaces;
    for (const auto& decl : nl.decls) {
      built.emplace(decl.instance, lib.instantiate(decl));
    }
    for (const auto& decl : nl.decls) {
      const auto& sp = built.at(decl.instance).spaces;
      spaces.insert(spaces.end(), sp.begin(), sp.end());
    }
    SLHTriple reduced = reduce(term, [&](const std::string& name) {
      auto it = built.find(name);
      if (it == built.end()) throw UserError("unknown instance in term: " + name);
      return it->second.slh;
    });
    if (reduce_format == "json") {
      write_output(reduce_out, slh_to_json(reduced, spaces), out);
    } else {
      text << "term: " << pretty_print(term) << "\n";
      text << render_slh_text(reduced);
      write_output(reduce_out, text.str(), out);
    }
    return 0;
  }

  if (cmd_sim->parsed()) {
    LoadedSLH loaded = slh_from_json(read_file(sim_in));
    if (loaded.spaces.empty()) {
      throw UserError("the model declares no degrees of freedom to simulate");
    }
    SpaceLayout layout{loaded.spaces};

    Bindings bindings;
    for (const std::string& spec : sim_bindings) {
      std::size_t eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw UserError("bad binding '" + spec + "' (expected name=value)");
      }
      bindings[spec.substr(0, eq)] = parse_binding_value(spec.substr(eq + 1));
    }

    LindbladModel model;
    model.layout = layout;
    model.H = to_matrix(loaded.slh.H, layout, bindings);
    for (const OperatorExpr& l : loaded.slh.L) {
      model.lindblads.push_back(to_matrix(l, layout, bindings));
    }

    if (sim_fidelity.empty() && sim_initial.empty()) {
      throw UserError("provide --fidelity or --initial to fix the start state");
    }
    Eigen::VectorXcd psi0 = parse_ket(
        sim_initial.empty() ? sim_fidelity : sim_initial, layout);
    Eigen::MatrixXcd rho0 = psi0 * psi0.adjoint();

    std::vector<Observable> observables;
    if (!sim_fidelity.empty()) {
      Eigen::VectorXcd target = parse_ket(sim_fidelity, layout);
      observables.push_back(
          Observable{"fidelity", target * target.adjoint()});
    }
    std::set<std::string> complex_names;
    for (const auto& [name, real_domain] : loaded.symbols) {
      if (!real_domain) complex_names.insert(name);
    }
    for (const std::string& spec : sim_observables) {
      std::size_t eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw UserError("bad observable '" + spec + "' (expected name=operator)");
      }
      OperatorExpr op = parse_operator(spec.substr(eq + 1), complex_names);
      observables.push_back(Observable{
          spec.substr(0, eq), to_matrix(op, layout, bindings)});
    }

    SimOptions opt;
    opt.t_final = sim_t_final;
    opt.dt = sim_dt;
    opt.method = sim_method == "rk45" ? StepMethod::rk45 : StepMethod::rk4;
    opt.sample_stride = sim_stride;
    Trajectory traj = integrate(model, rho0, observables, opt);
    write_output(sim_out, trajectory_csv(traj), out);
    return 0;
  }

  err << "error: no subcommand given\n";
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const NetlistParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const UserError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace slh::cli
