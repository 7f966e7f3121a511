#include "slhkit/netlist_rewrite.hpp"

#include <algorithm>
#include <set>

#include "slhkit/errors.hpp"

namespace slh {

namespace {

bool same_connection(const Connection& a, const Connection& b) {
  return a.from == b.from && a.to == b.to;
}

bool netlist_has(const Netlist& nl, const Connection& c) {
  return std::any_of(nl.connections.begin(), nl.connections.end(),
                     [&](const Connection& x) { return same_connection(x, c); });
}

std::string connection_str(const Connection& c) {
  return c.from.str() + " -> " + c.to.str();
}

}  // namespace

std::pair<Netlist, RewriteReport> insert_losses(const Netlist& nl,
                                                const LossAssignment& la) {
  for (const auto& [key, theta] : la.overrides) {
    (void)theta;
    if (!netlist_has(nl, key)) {
      throw UserError("override names a connection not in the netlist: " +
                      connection_str(key));
    }
  }
  for (const auto& key : la.exclude) {
    if (!netlist_has(nl, key)) {
      throw UserError("exclude names a connection not in the netlist: " +
                      connection_str(key));
    }
  }

  std::set<std::string> taken;
  for (const auto& decl : nl.decls) taken.insert(decl.instance);

  Netlist out;
  out.name = nl.name;
  out.decls = nl.decls;
  RewriteReport report;

  int counter = 1;
  for (const auto& conn : nl.connections) {
    bool excluded =
        std::any_of(la.exclude.begin(), la.exclude.end(),
                    [&](const Connection& x) { return same_connection(x, conn); });
    if (excluded) {
      out.connections.push_back(conn);
      continue;
    }

    ParamExpr theta = la.default_theta;
    for (const auto& [key, value] : la.overrides) {
      if (same_connection(key, conn)) {
        theta = value;
        break;
      }
    }

    std::string name;
    do {
      name = "Lz" + std::to_string(counter++);
    } while (taken.count(name));
    taken.insert(name);

    ComponentDecl loss;
    loss.type_path = "Photonics.Components.Loss";
    loss.instance = name;
    loss.params.emplace_back("LossParam", theta);
    out.decls.push_back(loss);

    Connection into;
    into.from = conn.from;
    into.to = PortRef{name, PortDir::input, 1};
    Connection onward;
    onward.from = PortRef{name, PortDir::output, 1};
    onward.to = conn.to;
    out.connections.push_back(into);
    out.connections.push_back(onward);

    report.inserted.push_back(LossInsertion{conn, name, theta});
  }
  return {std::move(out), std::move(report)};
}

Netlist insert_component_on_connection(const Netlist& nl, const Connection& c,
                                       const ComponentDecl& decl, int in_port,
                                       int out_port) {
  if (!netlist_has(nl, c)) {
    throw UserError("no such connection: " + connection_str(c));
  }
  if (nl.find_decl(decl.instance)) {
    throw UserError("instance name already declared: " + decl.instance);
  }
  if (in_port < 1 || out_port < 1) {
    throw UserError("splice ports must be positive");
  }

  Netlist out;
  out.name = nl.name;
  out.decls = nl.decls;
  out.decls.push_back(decl);
  for (const auto& conn : nl.connections) {
    if (!same_connection(conn, c)) {
      out.connections.push_back(conn);
      continue;
    }
    Connection into;
    into.from = conn.from;
    into.to = PortRef{decl.instance, PortDir::input, in_port};
    Connection onward;
    onward.from = PortRef{decl.instance, PortDir::output, out_port};
    onward.to = conn.to;
    out.connections.push_back(into);
    out.connections.push_back(onward);
  }
  return out;
}

}  // namespace slh
