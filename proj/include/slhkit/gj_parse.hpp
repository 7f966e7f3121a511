#pragma once

#include <string>
#include <vector>

#include "slhkit/circuit_algebra.hpp"
#include "slhkit/component_lib.hpp"
#include "slhkit/netlist.hpp"
#include "slhkit/slh.hpp"

namespace slh {

// Exact rational connection score in [0, 1].
struct Fraction {
  long long num = 0;
  long long den = 1;

  static Fraction of(long long num, long long den);
  std::string str2() const;  // fixed two decimals: "1.00", "0.33"
};

int cmp(const Fraction& a, const Fraction& b);
bool operator==(const Fraction& a, const Fraction& b);

// An external port of an assembled circuit, named by the component port that
// reaches the boundary.  Ancilla ports are those beyond the component's
// netlist-visible arity (e.g. the vacuum side of a loss tap).
struct ExtPort {
  std::string instance;
  int index = 1;  // 1-based, full port ordering
  bool ancilla = false;
};

bool operator==(const ExtPort& a, const ExtPort& b);

struct ParseStep {
  std::string name;      // name given to the new group, e.g. "BC"
  CircuitTerm fragment;  // replacement with child groups as named leaves
  Fraction score;

  std::string description() const;  // e.g. "BC = B ◁ C"
};

struct ParseTrace {
  std::vector<ParseStep> steps;
};

// Renders the trace as a "Step | Replacement | Score" table.
std::string format_trace(const ParseTrace& trace);

struct ParseResult {
  CircuitTerm term;
  ParseTrace trace;
  std::vector<ExtPort> inputs;   // port identities in the term's input order
  std::vector<ExtPort> outputs;  // likewise for outputs
};

// Greedy conversion: repeatedly pick the highest-scoring connected pair of
// groups — score = (#connections)/max(n_out(upstream), n_in(downstream)),
// and 1 for a group's self-loop — and replace it with a series or feedback
// construction, padding with identity lines and inserting a permutation only
// when port indices require reordering.  Ties break on the (upstream,
// downstream) group creation order.  Disconnected groups are joined with the
// concatenation product at the end.  Deterministic.
ParseResult netlist_to_term(const Netlist& nl, const ComponentLibrary& lib);

// Oracle construction for equivalence testing: concatenate every declared
// component in order, then eliminate each connection (in listed order) with
// one feedback application.  Reduces to the same triple as the greedy term
// once external port order is aligned.
ParseResult netlist_to_term_naive(const Netlist& nl, const ComponentLibrary& lib);

// sigma[k-1] = 1-based position of from[k-1] within `to`.  Throws UserError
// unless `from` and `to` hold the same ports.  Use positions_in(from, to)
// with permute_outputs to turn output order `from` into `to`, and
// positions_in(to, from) with permute_inputs for inputs.
std::vector<int> positions_in(const std::vector<ExtPort>& from,
                              const std::vector<ExtPort>& to);

struct ReducedModel {
  SLHTriple slh;
  std::vector<LocalSpace> spaces;  // internal degrees of freedom, decl order
  std::vector<ExtPort> inputs;     // canonical order (see reduce_netlist)
  std::vector<ExtPort> outputs;
};

// Full pipeline: validate against the library, parse greedily, instantiate
// every component, reduce the term, then rotate the external ports into the
// canonical order: netlist-visible ports first by (declaration, port index),
// then ancilla ports in the same order.
ReducedModel reduce_netlist(const Netlist& nl, const ComponentLibrary& lib);

}  // namespace slh
