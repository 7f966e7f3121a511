#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slhkit/netlist.hpp"

namespace slh {

// Loss parameters for insert_losses.  Overrides and excludes are keyed by the
// connection they affect; every key must name a connection present in the
// target netlist.
struct LossAssignment {
  ParamExpr default_theta = ParamExpr::symbol("theta");
  std::vector<std::pair<Connection, ParamExpr>> overrides;
  std::vector<Connection> exclude;
};

struct LossInsertion {
  Connection original;
  std::string loss_instance;
  ParamExpr theta;
};

struct RewriteReport {
  std::vector<LossInsertion> inserted;
};

// Splices a loss tap into every non-excluded connection: X.output_i -> Y.input_j
// becomes X.output_i -> Lz<k>.input1 and Lz<k>.output1 -> Y.input_j, with a
// declaration Photonics.Components.Loss Lz<k>(LossParam=theta) appended.
// Fresh names Lz1, Lz2, ... are assigned in connection order, skipping any
// name the netlist already uses.  Throws UserError when an override or
// exclude key does not match any connection.
std::pair<Netlist, RewriteReport> insert_losses(const Netlist& nl,
                                                const LossAssignment& la);

// Replaces connection `c` with a two-connection splice through `decl`, which
// is appended to the declarations: c.from -> decl.input<in_port> and
// decl.output<out_port> -> c.to.  Throws UserError when `c` is absent or the
// instance name is already taken.
Netlist insert_component_on_connection(const Netlist& nl, const Connection& c,
                                       const ComponentDecl& decl, int in_port,
                                       int out_port);

}  // namespace slh
