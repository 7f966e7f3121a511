#include "slhkit/component_lib.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "slhkit/errors.hpp"
#include "slhkit/op_parse.hpp"

namespace slh {

namespace {

ScalarExpr trig_arg_scalar(const ParamExpr& p,
                           ScalarExpr (*factory)(const LinArg&)) {
  if (p.numeric) return factory(LinArg::number(p.number));
  return factory(LinArg::symbol(p.ident));
}

ScalarExpr cos_of(const ParamExpr& p) { return trig_arg_scalar(p, &ScalarExpr::cos); }
ScalarExpr sin_of(const ParamExpr& p) { return trig_arg_scalar(p, &ScalarExpr::sin); }
ScalarExpr expi_of(const ParamExpr& p) { return trig_arg_scalar(p, &ScalarExpr::expi); }

SLHTriple empty_triple(int n_in, int n_out) {
  SLHTriple t;
  t.n_in = n_in;
  t.n_out = n_out;
  t.S.assign(static_cast<std::size_t>(n_in) * static_cast<std::size_t>(n_out),
             OperatorExpr());
  t.L.assign(static_cast<std::size_t>(n_out), OperatorExpr());
  t.H = OperatorExpr();
  return t;
}

// S = ((cos t, -sin t), (sin t, cos t)) with no internal dynamics.
SLHTriple rotation_triple(const ParamExpr& angle) {
  SLHTriple t = empty_triple(2, 2);
  OperatorExpr c{cos_of(angle)};
  OperatorExpr s{sin_of(angle)};
  t.s(0, 0) = c;
  t.s(0, 1) = -s;
  t.s(1, 0) = s;
  t.s(1, 1) = c;
  return t;
}

int integer_param(const ComponentDecl& d, const std::string& name) {
  const ParamExpr* p = d.find_param(name);
  return static_cast<int>(std::llround(p->number));
}

std::vector<int> sigma_from_digits(const ComponentDecl& d) {
  long long code = std::llround(d.find_param("Sigma")->number);
  std::string digits = std::to_string(code);
  std::vector<int> sigma;
  sigma.reserve(digits.size());
  for (char ch : digits) sigma.push_back(ch - '0');
  return sigma;
}

std::string space_label_for(const ComponentDecl& d) {
  const ParamExpr* p = d.find_param("HilbertSpace");
  return p ? p->ident : d.instance;
}

PortProfile square_profile(int n) { return PortProfile{n, n, n, n}; }

ComponentModel beamsplitter_model() {
  ComponentModel m;
  m.type_path = "Photonics.Components.Beamsplitter";
  m.params = {{"Theta", ParamSpec::Kind::real_param, {}, true}};
  m.profile = [](const ComponentDecl&) { return square_profile(2); };
  m.build = [](const ComponentDecl& d) {
    InstantiatedComponent r;
    r.slh = rotation_triple(*d.find_param("Theta"));
    r.ports = square_profile(2);
    return r;
  };
  return m;
}

// A tap coupling the through line to an unobserved vacuum mode: the netlist
// sees one input and one output; the full model is the 2x2 rotation with the
// ancilla pair appended, so output 2 ends up as an extra dissipation channel
// after reduction.
ComponentModel loss_model() {
  ComponentModel m;
  m.type_path = "Photonics.Components.Loss";
  m.params = {{"LossParam", ParamSpec::Kind::real_param, {}, true}};
  m.profile = [](const ComponentDecl&) { return PortProfile{1, 1, 2, 2}; };
  m.build = [](const ComponentDecl& d) {
    InstantiatedComponent r;
    r.slh = rotation_triple(*d.find_param("LossParam"));
    r.ports = PortProfile{1, 1, 2, 2};
    return r;
  };
  return m;
}

ComponentModel coherent_field_model() {
  ComponentModel m;
  m.type_path = "Photonics.Components.CoherentField";
  m.params = {{"Amplitude", ParamSpec::Kind::complex_param, {}, true}};
  m.profile = [](const ComponentDecl&) { return square_profile(1); };
  m.build = [](const ComponentDecl& d) {
    InstantiatedComponent r;
    r.slh = empty_triple(1, 1);
    r.slh.s(0, 0) = OperatorExpr(1.0);
    r.slh.L[0] = OperatorExpr(param_to_scalar(*d.find_param("Amplitude"), false));
    r.ports = square_profile(1);
    return r;
  };
  return m;
}

ComponentModel phase_model() {
  ComponentModel m;
  m.type_path = "Photonics.Components.Phase";
  m.params = {{"Phi", ParamSpec::Kind::real_param, {}, true}};
  m.profile = [](const ComponentDecl&) { return square_profile(1); };
  m.build = [](const ComponentDecl& d) {
    InstantiatedComponent r;
    r.slh = empty_triple(1, 1);
    r.slh.s(0, 0) = OperatorExpr(expi_of(*d.find_param("Phi")));
    r.ports = square_profile(1);
    return r;
  };
  return m;
}

ComponentModel single_cavity_model() {
  ComponentModel m;
  m.type_path = "Photonics.Components.SingleCavity";
  m.params = {{"CavityType", ParamSpec::Kind::enum_tag, {"Zprobe"}, true},
              {"HilbertSpace", ParamSpec::Kind::space_label, {}, false}};
  m.profile = [](const ComponentDecl&) { return square_profile(1); };
  m.build = [](const ComponentDecl& d) {
    InstantiatedComponent r;
    std::string label = space_label_for(d);
    r.slh = empty_triple(1, 1);
    // Zprobe: the reflected field picks up a pi phase conditioned on the
    // resident two-level system, S = (Z), with no drift or dissipation.
    r.slh.s(0, 0) = OperatorExpr::pauli_z(label);
    r.ports = square_profile(1);
    r.spaces = {LocalSpace{label, SpaceKind::qubit, 2}};
    return r;
  };
  return m;
}

ComponentModel identity_model() {
  ComponentModel m;
  m.type_path = "Photonics.Components.Identity";
  m.params = {{"Lines", ParamSpec::Kind::integer, {}, true}};
  m.profile = [](const ComponentDecl& d) {
    return square_profile(integer_param(d, "Lines"));
  };
  m.build = [](const ComponentDecl& d) {
    int n = integer_param(d, "Lines");
    InstantiatedComponent r;
    r.slh = SLHTriple::identity(n);
    r.ports = square_profile(n);
    return r;
  };
  return m;
}

ComponentModel permutation_model() {
  ComponentModel m;
  m.type_path = "Photonics.Components.Permutation";
  m.params = {{"Sigma", ParamSpec::Kind::integer, {}, true}};
  m.profile = [](const ComponentDecl& d) {
    return square_profile(static_cast<int>(sigma_from_digits(d).size()));
  };
  m.build = [](const ComponentDecl& d) {
    std::vector<int> sigma = sigma_from_digits(d);
    InstantiatedComponent r;
    r.slh = permutation_slh(sigma);  // throws UserError on bad digit strings
    r.ports = square_profile(static_cast<int>(sigma.size()));
    return r;
  };
  return m;
}

// Inert placeholder with arbitrary rectangular arity; scattering is the
// truncated identity.  Used for block-structure experiments where only port
// counts matter.
ComponentModel static_model() {
  ComponentModel m;
  m.type_path = "Photonics.Components.Static";
  m.params = {{"Inputs", ParamSpec::Kind::integer, {}, true},
              {"Outputs", ParamSpec::Kind::integer, {}, true}};
  m.profile = [](const ComponentDecl& d) {
    int in = integer_param(d, "Inputs");
    int out = integer_param(d, "Outputs");
    return PortProfile{in, out, in, out};
  };
  m.build = [](const ComponentDecl& d) {
    int in = integer_param(d, "Inputs");
    int out = integer_param(d, "Outputs");
    InstantiatedComponent r;
    r.slh = empty_triple(in, out);
    for (int k = 0; k < std::min(in, out); ++k) r.slh.s(k, k) = OperatorExpr(1.0);
    r.ports = PortProfile{in, out, in, out};
    return r;
  };
  return m;
}

std::string replace_all(std::string text, const std::string& from,
                        const std::string& to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

}  // namespace

ScalarExpr param_to_scalar(const ParamExpr& p, bool real_domain) {
  if (p.numeric) return ScalarExpr(p.number);
  return ScalarExpr::symbol(p.ident, real_domain);
}

ComponentLibrary ComponentLibrary::builtins() {
  ComponentLibrary lib;
  lib.add(beamsplitter_model());
  lib.add(loss_model());
  lib.add(coherent_field_model());
  lib.add(phase_model());
  lib.add(single_cavity_model());
  lib.add(identity_model());
  lib.add(permutation_model());
  lib.add(static_model());
  return lib;
}

void ComponentLibrary::add(ComponentModel m) {
  if (models_.count(m.type_path)) {
    throw UserError("component type already registered: " + m.type_path);
  }
  std::string key = m.type_path;
  models_.emplace(std::move(key), std::move(m));
}

bool ComponentLibrary::has(const std::string& type_path) const {
  return models_.count(type_path) != 0;
}

const ComponentModel& ComponentLibrary::at(const std::string& type_path) const {
  auto it = models_.find(type_path);
  if (it == models_.end()) throw UserError("unknown component type: " + type_path);
  return it->second;
}

std::vector<std::string> ComponentLibrary::type_paths() const {
  std::vector<std::string> out;
  out.reserve(models_.size());
  for (const auto& [path, model] : models_) out.push_back(path);
  return out;
}

std::vector<std::string> ComponentLibrary::param_problems(
    const ComponentDecl& decl) const {
  std::vector<std::string> out;
  auto it = models_.find(decl.type_path);
  if (it == models_.end()) {
    out.push_back(decl.instance + ": unknown component type " + decl.type_path);
    return out;
  }
  const ComponentModel& m = it->second;

  std::set<std::string> known;
  for (const auto& spec : m.params) known.insert(spec.name);
  std::set<std::string> seen;
  for (const auto& [name, value] : decl.params) {
    if (!known.count(name)) {
      out.push_back(decl.instance + ": " + decl.type_path +
                    " has no parameter '" + name + "'");
    } else if (!seen.insert(name).second) {
      out.push_back(decl.instance + ": parameter '" + name +
                    "' given more than once");
    }
  }

  for (const auto& spec : m.params) {
    const ParamExpr* p = decl.find_param(spec.name);
    if (!p) {
      if (spec.required) {
        out.push_back(decl.instance + ": missing required parameter '" +
                      spec.name + "'");
      }
      continue;
    }
    switch (spec.kind) {
      case ParamSpec::Kind::real_param:
      case ParamSpec::Kind::complex_param:
        break;  // both identifier and number are acceptable
      case ParamSpec::Kind::enum_tag: {
        bool ok = !p->numeric &&
                  std::find(spec.tags.begin(), spec.tags.end(), p->ident) !=
                      spec.tags.end();
        if (!ok) {
          std::ostringstream msg;
          msg << decl.instance << ": parameter '" << spec.name << "' must be one of {";
          for (std::size_t i = 0; i < spec.tags.size(); ++i) {
            if (i) msg << ", ";
            msg << spec.tags[i];
          }
          msg << "}";
          out.push_back(msg.str());
        }
        break;
      }
      case ParamSpec::Kind::space_label:
        if (p->numeric) {
          out.push_back(decl.instance + ": parameter '" + spec.name +
                        "' must be an identifier");
        }
        break;
      case ParamSpec::Kind::integer:
        if (p->numeric) {
          double v = p->number;
          if (v < 0 || v != std::floor(v)) {
            out.push_back(decl.instance + ": parameter '" + spec.name +
                          "' must be a nonnegative integer");
          }
        } else {
          out.push_back(decl.instance + ": parameter '" + spec.name +
                        "' must be a number");
        }
        break;
    }
  }
  return out;
}

PortProfile ComponentLibrary::profile(const ComponentDecl& decl) const {
  std::vector<std::string> problems = param_problems(decl);
  if (!problems.empty()) throw UserError(problems.front());
  return at(decl.type_path).profile(decl);
}

InstantiatedComponent ComponentLibrary::instantiate(
    const ComponentDecl& decl) const {
  std::vector<std::string> problems = param_problems(decl);
  if (!problems.empty()) throw UserError(problems.front());
  return at(decl.type_path).build(decl);
}

void ComponentLibrary::load_manifest(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("components") ||
      !doc["components"].is_array()) {
    throw UserError("manifest must be an object with a 'components' array");
  }

  for (const auto& entry : doc["components"]) {
    if (!entry.is_object() || !entry.contains("type")) {
      throw UserError("each manifest component needs a 'type' string");
    }
    ComponentModel m;
    m.type_path = entry["type"].get<std::string>();

    std::set<std::string> complex_names;
    if (entry.contains("params")) {
      for (const auto& pj : entry["params"]) {
        ParamSpec spec;
        spec.name = pj.at("name").get<std::string>();
        std::string kind = pj.value("kind", std::string("real"));
        if (kind == "real") {
          spec.kind = ParamSpec::Kind::real_param;
        } else if (kind == "complex") {
          spec.kind = ParamSpec::Kind::complex_param;
          complex_names.insert(spec.name);
        } else if (kind == "integer") {
          spec.kind = ParamSpec::Kind::integer;
        } else if (kind == "label") {
          spec.kind = ParamSpec::Kind::space_label;
        } else {
          throw UserError(m.type_path + ": unknown parameter kind '" + kind +
                          "' (use real, complex, integer, or label)");
        }
        spec.required = pj.value("required", true);
        m.params.push_back(std::move(spec));
      }
    }

    int n_in = entry.value("inputs", 0);
    int n_out = entry.value("outputs", 0);
    int anc_in = entry.value("ancilla_inputs", 0);
    int anc_out = entry.value("ancilla_outputs", 0);
    if (n_in < 0 || n_out < 0 || anc_in < 0 || anc_out < 0) {
      throw UserError(m.type_path + ": port counts must be nonnegative");
    }
    PortProfile ports{n_in, n_out, n_in + anc_in, n_out + anc_out};

    std::vector<std::vector<std::string>> s_rows;
    if (entry.contains("S")) {
      for (const auto& row : entry["S"]) {
        std::vector<std::string> cells;
        for (const auto& cell : row) cells.push_back(cell.get<std::string>());
        s_rows.push_back(std::move(cells));
      }
    }
    if (static_cast<int>(s_rows.size()) != ports.full_out) {
      throw UserError(m.type_path + ": S must have one row per output");
    }
    for (const auto& row : s_rows) {
      if (static_cast<int>(row.size()) != ports.full_in) {
        throw UserError(m.type_path + ": S must have one column per input");
      }
    }
    std::vector<std::string> l_cells;
    if (entry.contains("L")) {
      for (const auto& cell : entry["L"]) l_cells.push_back(cell.get<std::string>());
    } else {
      l_cells.assign(static_cast<std::size_t>(ports.full_out), "0");
    }
    if (static_cast<int>(l_cells.size()) != ports.full_out) {
      throw UserError(m.type_path + ": L must have one entry per output");
    }
    std::string h_text = entry.value("H", std::string("0"));

    struct SpaceSpec {
      std::string label;
      std::string kind;
      int dim = 0;
    };
    std::vector<SpaceSpec> space_specs;
    if (entry.contains("spaces")) {
      for (const auto& sj : entry["spaces"]) {
        SpaceSpec spec;
        spec.label = sj.at("label").get<std::string>();
        spec.kind = sj.value("kind", std::string("qubit"));
        spec.dim = sj.value("dim", spec.kind == "boson" ? 6 : 2);
        space_specs.push_back(std::move(spec));
      }
    }

    // Parse once against a placeholder instance to surface bad operator text
    // at load time rather than at first use.
    auto build_for = [s_rows, l_cells, h_text, complex_names, space_specs,
                      ports, params = m.params,
                      type_path = m.type_path](const ComponentDecl& d) {
      InstantiatedComponent r;
      r.ports = ports;
      r.slh.n_in = ports.full_in;
      r.slh.n_out = ports.full_out;

      auto parse_cell = [&](const std::string& text) {
        std::string bound = replace_all(text, "$instance", d.instance);
        OperatorExpr e;
        try {
          e = parse_operator(bound, complex_names);
        } catch (const OperatorParseError& err) {
          throw UserError(type_path + ": bad operator text '" + text + "': " +
                          err.what());
        }
        // Bind declared parameters: numbers fold in, identifiers rename.
        std::map<std::string, ScalarExpr> binding;
        for (const auto& spec : params) {
          const ParamExpr* p = d.find_param(spec.name);
          if (!p) continue;
          if (spec.kind == ParamSpec::Kind::space_label ||
              spec.kind == ParamSpec::Kind::enum_tag) {
            continue;
          }
          bool real_domain = spec.kind != ParamSpec::Kind::complex_param;
          binding.emplace(spec.name, param_to_scalar(*p, real_domain));
        }
        if (!binding.empty()) e = e.substituted(binding);
        return e;
      };

      for (const auto& row : s_rows) {
        for (const auto& cell : row) r.slh.S.push_back(parse_cell(cell));
      }
      for (const auto& cell : l_cells) r.slh.L.push_back(parse_cell(cell));
      r.slh.H = parse_cell(h_text);

      for (const auto& spec : space_specs) {
        LocalSpace sp;
        sp.label = replace_all(spec.label, "$instance", d.instance);
        sp.kind = space_kind_from_name(spec.kind);
        sp.dim = spec.dim;
        r.spaces.push_back(std::move(sp));
      }
      return r;
    };

    {
      ComponentDecl probe;
      probe.type_path = m.type_path;
      probe.instance = "probe0";
      for (const auto& spec : m.params) {
        if (spec.kind == ParamSpec::Kind::integer) {
          probe.params.emplace_back(spec.name, ParamExpr::value(1));
        } else if (spec.kind == ParamSpec::Kind::enum_tag && !spec.tags.empty()) {
          probe.params.emplace_back(spec.name, ParamExpr::symbol(spec.tags[0]));
        } else {
          probe.params.emplace_back(spec.name, ParamExpr::symbol(spec.name));
        }
      }
      build_for(probe);  // throws UserError on malformed operator text
    }

    m.profile = [ports](const ComponentDecl&) { return ports; };
    m.build = build_for;
    add(std::move(m));
  }
}

std::vector<Diagnostic> validate(const Netlist& nl, const ComponentLibrary& lib) {
  std::vector<Diagnostic> out;

  for (const auto& decl : nl.decls) {
    for (const std::string& msg : lib.param_problems(decl)) {
      out.push_back(Diagnostic{msg, decl.loc});
    }
  }

  std::map<std::string, PortProfile> cache;
  auto arity_of = [&](const std::string& instance) -> const PortProfile* {
    auto it = cache.find(instance);
    if (it != cache.end()) return &it->second;
    const ComponentDecl* decl = nl.find_decl(instance);
    if (!decl) return nullptr;
    if (!lib.has(decl->type_path) || !lib.param_problems(*decl).empty()) {
      return nullptr;
    }
    auto [pos, inserted] = cache.emplace(instance, lib.profile(*decl));
    return &pos->second;
  };

  std::map<std::string, const Connection*> seen_from;
  std::map<std::string, const Connection*> seen_to;
  for (const auto& conn : nl.connections) {
    const ComponentDecl* from_decl = nl.find_decl(conn.from.instance);
    const ComponentDecl* to_decl = nl.find_decl(conn.to.instance);
    if (!from_decl) {
      out.push_back(Diagnostic{"connection references undeclared instance " +
                                   conn.from.instance,
                               conn.loc});
    }
    if (!to_decl) {
      out.push_back(Diagnostic{"connection references undeclared instance " +
                                   conn.to.instance,
                               conn.loc});
    }

    if (from_decl) {
      if (const PortProfile* p = arity_of(conn.from.instance)) {
        if (conn.from.index < 1 || conn.from.index > p->visible_out) {
          out.push_back(Diagnostic{conn.from.str() + " is out of range (" +
                                       conn.from.instance + " has " +
                                       std::to_string(p->visible_out) +
                                       " outputs)",
                                   conn.loc});
        }
      }
    }
    if (to_decl) {
      if (const PortProfile* p = arity_of(conn.to.instance)) {
        if (conn.to.index < 1 || conn.to.index > p->visible_in) {
          out.push_back(Diagnostic{conn.to.str() + " is out of range (" +
                                       conn.to.instance + " has " +
                                       std::to_string(p->visible_in) +
                                       " inputs)",
                                   conn.loc});
        }
      }
    }

    std::string from_key = conn.from.str();
    std::string to_key = conn.to.str();
    if (!seen_from.emplace(from_key, &conn).second) {
      out.push_back(
          Diagnostic{from_key + " drives more than one connection", conn.loc});
    }
    if (!seen_to.emplace(to_key, &conn).second) {
      out.push_back(
          Diagnostic{to_key + " is driven by more than one connection", conn.loc});
    }
  }
  return out;
}

}  // namespace slh
