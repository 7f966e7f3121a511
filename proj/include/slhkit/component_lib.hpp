#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "slhkit/master_eq.hpp"
#include "slhkit/netlist.hpp"
#include "slhkit/slh.hpp"

namespace slh {

// Port arity of a component as seen from two sides: the netlist wires only
// the visible ports; instantiation may add implicit ancilla ports (e.g. the
// vacuum input and reflection output of a loss tap), which are appended after
// the visible ones in the full SLH.
struct PortProfile {
  int visible_in = 0;
  int visible_out = 0;
  int full_in = 0;
  int full_out = 0;
};

struct InstantiatedComponent {
  SLHTriple slh;  // full arity
  PortProfile ports;
  std::vector<LocalSpace> spaces;  // internal degrees of freedom
};

struct ParamSpec {
  enum class Kind {
    real_param,     // identifier (real symbol) or number
    complex_param,  // identifier (complex symbol) or number
    enum_tag,       // identifier drawn from `tags`
    space_label,    // identifier naming an internal degree of freedom
    integer,        // nonnegative integral number
  };
  std::string name;
  Kind kind = Kind::real_param;
  std::vector<std::string> tags;
  bool required = true;
};

struct ComponentModel {
  std::string type_path;
  std::vector<ParamSpec> params;
  // Both callbacks may assume the declaration passed the parameter schema.
  std::function<PortProfile(const ComponentDecl&)> profile;
  std::function<InstantiatedComponent(const ComponentDecl&)> build;
};

// Converts a schema-checked parameter to a coefficient expression: numbers
// become literals, identifiers become symbols of the requested domain.
ScalarExpr param_to_scalar(const ParamExpr& p, bool real_domain);

class ComponentLibrary {
 public:
  // The Photonics.Components.* set: Beamsplitter(Theta), Loss(LossParam),
  // CoherentField(Amplitude), Phase(Phi), SingleCavity(CavityType[,
  // HilbertSpace]), Identity(Lines), Permutation(Sigma), Static(Inputs,
  // Outputs).
  static ComponentLibrary builtins();

  void add(ComponentModel m);  // throws UserError on a duplicate type path
  bool has(const std::string& type_path) const;
  const ComponentModel& at(const std::string& type_path) const;
  std::vector<std::string> type_paths() const;

  // Schema check only; one message per problem, empty when clean.
  std::vector<std::string> param_problems(const ComponentDecl& decl) const;

  // Both throw UserError when the declaration does not check out.
  PortProfile profile(const ComponentDecl& decl) const;
  InstantiatedComponent instantiate(const ComponentDecl& decl) const;

  // Registers user-defined components from a JSON manifest document holding
  // operator-text S/L/H entries (see README for the schema).  The string
  // "$instance" inside labels and operator text is replaced by the declared
  // instance name.
  void load_manifest(const std::string& json_text);

 private:
  std::map<std::string, ComponentModel> models_;
};

}  // namespace slh
