#pragma once

#include <string>
#include <utility>
#include <vector>

namespace slh {

class ComponentLibrary;

struct SourceLoc {
  int line = 0;  // 1-based; 0 when synthesized programmatically
  int col = 0;
};

enum class PortDir { input, output };

// 1-based reference to a component port, e.g. Q1.output1.
struct PortRef {
  std::string instance;
  PortDir dir = PortDir::input;
  int index = 1;

  std::string str() const;
};

int cmp(const PortRef& a, const PortRef& b);
bool operator==(const PortRef& a, const PortRef& b);

// A parameter value: either a numeric literal or an opaque identifier (a
// symbol or an enumeration tag — which one is decided by the component's
// parameter schema at instantiation time).
struct ParamExpr {
  bool numeric = false;
  std::string ident;   // when !numeric
  double number = 0.0;  // when numeric

  static ParamExpr symbol(std::string name);
  static ParamExpr value(double v);
  std::string str() const;
};

bool operator==(const ParamExpr& a, const ParamExpr& b);

using Params = std::vector<std::pair<std::string, ParamExpr>>;  // ordered

struct ComponentDecl {
  std::string type_path;  // e.g. Photonics.Components.Beamsplitter
  std::string instance;
  Params params;
  SourceLoc loc;

  const ParamExpr* find_param(const std::string& name) const;
};

bool operator==(const ComponentDecl& a, const ComponentDecl& b);  // ignores loc

struct Connection {
  PortRef from;  // direction = output
  PortRef to;    // direction = input
  SourceLoc loc;
};

bool operator==(const Connection& a, const Connection& b);  // ignores loc

struct Netlist {
  std::string name;
  std::vector<ComponentDecl> decls;
  std::vector<Connection> connections;

  const ComponentDecl* find_decl(const std::string& instance) const;
};

bool operator==(const Netlist& a, const Netlist& b);

// Parses the netlist language (see the grammar in the README).  Declaration
// and connection order is preserved.  Throws NetlistParseError with line and
// column on syntax errors, duplicate instance names, or connections that
// reference undeclared instances or ports other than input<k>/output<k>.
Netlist parse_netlist(const std::string& text);

// Inverse of parse_netlist: parse_netlist(serialize_netlist(nl)) == nl.
std::string serialize_netlist(const Netlist& nl);

struct Diagnostic {
  std::string message;
  SourceLoc loc;
};

// Library-aware validation: resolves every type path, checks parameter
// schemas, port indices against component arity, and the single-wiring rule
// (each output drives at most one connection, each input is driven by at most
// one).  Returns one diagnostic per violation; empty means valid.
std::vector<Diagnostic> validate(const Netlist& nl, const ComponentLibrary& lib);

}  // namespace slh
