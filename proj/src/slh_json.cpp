#include "slhkit/slh_json.hpp"

#include <set>

#include "json.hpp"

#include "slhkit/errors.hpp"
#include "slhkit/op_parse.hpp"

namespace slh {

namespace {

std::string port_name(const ExtPort& p, PortDir dir) {
  PortRef ref{p.instance, dir, p.index};
  return ref.str();
}

nlohmann::json port_array(const std::vector<ExtPort>& ports, PortDir dir) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ExtPort& p : ports) {
    arr.push_back({{"name", port_name(p, dir)}, {"ancilla", p.ancilla}});
  }
  return arr;
}

}  // namespace

std::string slh_to_json(const SLHTriple& t, const std::vector<LocalSpace>& spaces,
                        const std::vector<ExtPort>& inputs,
                        const std::vector<ExtPort>& outputs) {
  nlohmann::json doc;
  doc["ports"] = {
      {"in", t.n_in},
      {"out", t.n_out},
      {"names",
       {{"inputs", port_array(inputs, PortDir::input)},
        {"outputs", port_array(outputs, PortDir::output)}}},
  };

  nlohmann::json s_rows = nlohmann::json::array();
  for (int r = 0; r < t.n_out; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < t.n_in; ++c) row.push_back(t.s(r, c).str());
    s_rows.push_back(std::move(row));
  }
  doc["S"] = std::move(s_rows);

  nlohmann::json l_cells = nlohmann::json::array();
  for (const OperatorExpr& l : t.L) l_cells.push_back(l.str());
  doc["L"] = std::move(l_cells);
  doc["H"] = t.H.str();

  nlohmann::json space_arr = nlohmann::json::array();
  for (const LocalSpace& sp : spaces) {
    space_arr.push_back({{"label", sp.label},
                         {"kind", space_kind_name(sp.kind)},
                         {"dim", sp.dim}});
  }
  doc["spaces"] = std::move(space_arr);

  std::map<std::string, bool> symbols;
  for (const OperatorExpr& e : t.S) e.collect_symbols(symbols);
  for (const OperatorExpr& e : t.L) e.collect_symbols(symbols);
  t.H.collect_symbols(symbols);
  nlohmann::json sym_arr = nlohmann::json::array();
  for (const auto& [name, real_domain] : symbols) {
    sym_arr.push_back(
        {{"name", name}, {"domain", real_domain ? "real" : "complex"}});
  }
  doc["symbols"] = std::move(sym_arr);

  return doc.dump(2) + "\n";
}

std::string reduced_model_to_json(const ReducedModel& model) {
  return slh_to_json(model.slh, model.spaces, model.inputs, model.outputs);
}

LoadedSLH slh_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("not valid JSON: ") + e.what());
  }

  LoadedSLH out;
  try {
    std::set<std::string> complex_names;
    if (doc.contains("symbols")) {
      for (const auto& sym : doc["symbols"]) {
        std::string name = sym.at("name").get<std::string>();
        bool real_domain = sym.value("domain", std::string("real")) == "real";
        out.symbols[name] = real_domain;
        if (!real_domain) complex_names.insert(name);
      }
    }
    auto cell = [&](const nlohmann::json& j) {
      return parse_operator(j.get<std::string>(), complex_names);
    };

    const auto& ports = doc.at("ports");
    out.slh.n_in = ports.at("in").get<int>();
    out.slh.n_out = ports.at("out").get<int>();
    if (out.slh.n_in < 0 || out.slh.n_out < 0) {
      throw UserError("port counts must be nonnegative");
    }
    if (ports.contains("names")) {
      for (const auto& p : ports["names"].value("inputs", nlohmann::json::array())) {
        out.input_names.push_back(p.at("name").get<std::string>());
      }
      for (const auto& p :
           ports["names"].value("outputs", nlohmann::json::array())) {
        out.output_names.push_back(p.at("name").get<std::string>());
      }
    }

    const auto& s_rows = doc.at("S");
    if (static_cast<int>(s_rows.size()) != out.slh.n_out) {
      throw UserError("S row count does not match ports.out");
    }
    for (const auto& row : s_rows) {
      if (static_cast<int>(row.size()) != out.slh.n_in) {
        throw UserError("S column count does not match ports.in");
      }
      for (const auto& c : row) out.slh.S.push_back(cell(c));
    }
    const auto& l_cells = doc.at("L");
    if (static_cast<int>(l_cells.size()) != out.slh.n_out) {
      throw UserError("L entry count does not match ports.out");
    }
    for (const auto& c : l_cells) out.slh.L.push_back(cell(c));
    out.slh.H = cell(doc.at("H"));

    if (doc.contains("spaces")) {
      for (const auto& sp : doc["spaces"]) {
        LocalSpace space;
        space.label = sp.at("label").get<std::string>();
        space.kind = space_kind_from_name(sp.value("kind", std::string("qubit")));
        space.dim = sp.value("dim", 2);
        if (space.dim < 2) throw UserError("space dim must be at least 2");
        out.spaces.push_back(std::move(space));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UserError(std::string("malformed document: ") + e.what());
  } catch (const OperatorParseError& e) {
    throw UserError(std::string("bad operator text: ") + e.what());
  }
  return out;
}

}  // namespace slh
