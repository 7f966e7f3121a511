#include "slhkit/gj_parse.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "slhkit/errors.hpp"

namespace slh {

Fraction Fraction::of(long long num, long long den) {
  if (den <= 0) throw Error("fraction denominator must be positive");
  long long g = std::gcd(num, den);
  if (g == 0) g = 1;
  return Fraction{num / g, den / g};
}

std::string Fraction::str2() const {
  long long hundredths = (200 * num / den + 1) / 2;  // round half up
  std::string out = std::to_string(hundredths / 100);
  out += '.';
  out += static_cast<char>('0' + (hundredths / 10) % 10);
  out += static_cast<char>('0' + hundredths % 10);
  return out;
}

int cmp(const Fraction& a, const Fraction& b) {
  long long lhs = a.num * b.den;
  long long rhs = b.num * a.den;
  if (lhs < rhs) return -1;
  if (lhs > rhs) return 1;
  return 0;
}

bool operator==(const Fraction& a, const Fraction& b) { return cmp(a, b) == 0; }

bool operator==(const ExtPort& a, const ExtPort& b) {
  return a.instance == b.instance && a.index == b.index && a.ancilla == b.ancilla;
}

std::string ParseStep::description() const {
  return name + " = " + pretty_print(fragment);
}

std::string format_trace(const ParseTrace& trace) {
  std::ostringstream out;
  out << "Step | Replacement | Score\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    out << (i + 1) << " | " << trace.steps[i].description() << " | "
        << trace.steps[i].score.str2() << "\n";
  }
  return out.str();
}

namespace {

struct PortId {
  std::string instance;
  int index = 1;
};

struct Group {
  std::string name;
  CircuitTerm term;
  int created = 0;
  std::vector<ExtPort> ins;
  std::vector<ExtPort> outs;
  bool alive = true;
};

int position_of(const std::vector<ExtPort>& ports, const PortId& id) {
  for (std::size_t k = 0; k < ports.size(); ++k) {
    if (ports[k].instance == id.instance && ports[k].index == id.index) {
      return static_cast<int>(k) + 1;
    }
  }
  throw Error("port " + id.instance + "#" + std::to_string(id.index) +
              " is not on the group boundary");
}

CircuitTerm concat_chain(std::vector<CircuitTerm> parts) {
  if (parts.empty()) return CircuitTerm::identity(0);
  CircuitTerm acc = parts.back();
  for (std::size_t k = parts.size() - 1; k-- > 0;) {
    acc = CircuitTerm::concat(parts[k], acc);
  }
  return acc;
}

CircuitTerm leaf_for(const Group& g) {
  return CircuitTerm::component(g.name, static_cast<int>(g.ins.size()),
                                static_cast<int>(g.outs.size()));
}

// One series replacement: downstream ⊞-padded stage applied after the
// upstream ⊞-padded stage, with a permutation in between only when the port
// indices force one.  Produced in both the real term (children expanded) and
// the trace fragment (children as named leaves).
struct SeriesBuild {
  CircuitTerm real;
  CircuitTerm fragment;
  std::vector<ExtPort> ins;
  std::vector<ExtPort> outs;
};

SeriesBuild build_series(const Group& up, const Group& down,
                         const std::vector<std::pair<int, int>>& wires) {
  const int nx = static_cast<int>(up.outs.size());
  const int ny = static_cast<int>(down.ins.size());

  std::map<int, int> out_to_in;  // upstream out position -> downstream in position
  std::set<int> fed;
  for (const auto& [p, q] : wires) {
    out_to_in[p] = q;
    fed.insert(q);
  }
  std::vector<int> pad_targets;  // unconnected downstream inputs, ascending
  for (int q = 1; q <= ny; ++q) {
    if (!fed.count(q)) pad_targets.push_back(q);
  }
  const int b = static_cast<int>(pad_targets.size());
  const int w = nx + b;

  // Route every right-stage output line: either into a downstream input slot
  // or straight through to the boundary.
  std::vector<int> slot(static_cast<std::size_t>(w) + 1, 0);  // 0 = passthrough
  for (int l = 1; l <= nx; ++l) {
    auto it = out_to_in.find(l);
    if (it != out_to_in.end()) slot[static_cast<std::size_t>(l)] = it->second;
  }
  for (int j = 1; j <= b; ++j) {
    slot[static_cast<std::size_t>(nx + j)] = pad_targets[static_cast<std::size_t>(j - 1)];
  }

  // The downstream block consumes consecutive stage lines in input order; if
  // the routed slots already appear that way no permutation is needed.
  int first_slot_line = 0;
  int last_slot_line = 0;
  bool in_order = true;
  {
    int expected = 1;
    int prev_line = 0;
    for (int l = 1; l <= w; ++l) {
      if (slot[static_cast<std::size_t>(l)] == 0) continue;
      if (slot[static_cast<std::size_t>(l)] != expected ||
          (prev_line != 0 && l != prev_line + 1)) {
        in_order = false;
        break;
      }
      if (expected == 1) first_slot_line = l;
      prev_line = l;
      last_slot_line = l;
      ++expected;
    }
    if (ny == 0) in_order = true;
  }

  auto right_stage = [&](const CircuitTerm& x_term) {
    return b > 0 ? CircuitTerm::concat(x_term, CircuitTerm::identity(b)) : x_term;
  };

  SeriesBuild out;
  out.ins = up.ins;
  for (int q : pad_targets) out.ins.push_back(down.ins[static_cast<std::size_t>(q - 1)]);

  if (in_order && ny > 0) {
    const int lead = first_slot_line - 1;
    const int trail = w - last_slot_line;
    auto left_stage = [&](const CircuitTerm& y_term) {
      std::vector<CircuitTerm> parts;
      if (lead > 0) parts.push_back(CircuitTerm::identity(lead));
      parts.push_back(y_term);
      if (trail > 0) parts.push_back(CircuitTerm::identity(trail));
      return concat_chain(std::move(parts));
    };
    out.real = CircuitTerm::series(left_stage(down.term), right_stage(up.term));
    out.fragment =
        CircuitTerm::series(left_stage(leaf_for(down)), right_stage(leaf_for(up)));
    for (int l = 1; l <= lead; ++l) {
      out.outs.push_back(up.outs[static_cast<std::size_t>(l - 1)]);
    }
    out.outs.insert(out.outs.end(), down.outs.begin(), down.outs.end());
    for (int l = last_slot_line + 1; l <= w; ++l) {
      out.outs.push_back(up.outs[static_cast<std::size_t>(l - 1)]);
    }
    return out;
  }

  // General case: downstream block first, passthrough lines appended after,
  // with a permutation aligning the stage boundary.
  const int a = w - ny;  // passthrough line count
  std::vector<int> sigma(static_cast<std::size_t>(w));
  int next_pass = ny;
  for (int l = 1; l <= w; ++l) {
    int q = slot[static_cast<std::size_t>(l)];
    sigma[static_cast<std::size_t>(l - 1)] = q != 0 ? q : ++next_pass;
  }
  auto left_stage = [&](const CircuitTerm& y_term) {
    std::vector<CircuitTerm> parts;
    parts.push_back(y_term);
    if (a > 0) parts.push_back(CircuitTerm::identity(a));
    return concat_chain(std::move(parts));
  };
  auto stage = [&](const CircuitTerm& x_term, const CircuitTerm& y_term) {
    return CircuitTerm::series(
        left_stage(y_term),
        CircuitTerm::series(CircuitTerm::perm(sigma), right_stage(x_term)));
  };
  out.real = stage(up.term, down.term);
  out.fragment = stage(leaf_for(up), leaf_for(down));
  out.outs = down.outs;
  for (int l = 1; l <= w; ++l) {
    if (slot[static_cast<std::size_t>(l)] == 0) {
      out.outs.push_back(up.outs[static_cast<std::size_t>(l - 1)]);
    }
  }
  return out;
}

struct Assembly {
  std::vector<Group> groups;
  std::map<std::string, int> group_of;  // instance -> live group index
  std::vector<std::pair<PortId, PortId>> wires;
  std::set<std::string> used_names;
  int next_created = 0;
};

Assembly seed_assembly(const Netlist& nl, const ComponentLibrary& lib) {
  Assembly a;
  for (const auto& decl : nl.decls) {
    PortProfile p = lib.profile(decl);
    Group g;
    g.name = decl.instance;
    g.term = CircuitTerm::component(decl.instance, p.full_in, p.full_out);
    g.created = a.next_created++;
    for (int k = 1; k <= p.full_in; ++k) {
      g.ins.push_back(ExtPort{decl.instance, k, k > p.visible_in});
    }
    for (int k = 1; k <= p.full_out; ++k) {
      g.outs.push_back(ExtPort{decl.instance, k, k > p.visible_out});
    }
    a.group_of[decl.instance] = static_cast<int>(a.groups.size());
    a.groups.push_back(std::move(g));
    a.used_names.insert(decl.instance);
  }
  for (const auto& conn : nl.connections) {
    a.wires.push_back({PortId{conn.from.instance, conn.from.index},
                       PortId{conn.to.instance, conn.to.index}});
  }
  return a;
}

std::string fresh_letter_name(Assembly& a) {
  for (char c = 'A'; c <= 'Z'; ++c) {
    std::string candidate(1, c);
    if (!a.used_names.count(candidate)) return candidate;
  }
  for (int k = 1;; ++k) {
    std::string candidate = "G" + std::to_string(k);
    if (!a.used_names.count(candidate)) return candidate;
  }
}

std::string fresh_merge_name(Assembly& a, const std::string& base) {
  std::string candidate = base;
  while (a.used_names.count(candidate)) candidate += "_";
  return candidate;
}

ParseResult assemble(const Netlist& nl, const ComponentLibrary& lib, bool greedy);

}  // namespace

ParseResult netlist_to_term(const Netlist& nl, const ComponentLibrary& lib) {
  return assemble(nl, lib, /*greedy=*/true);
}

ParseResult netlist_to_term_naive(const Netlist& nl, const ComponentLibrary& lib) {
  return assemble(nl, lib, /*greedy=*/false);
}

namespace {

void require_valid(const Netlist& nl, const ComponentLibrary& lib) {
  std::vector<Diagnostic> problems = validate(nl, lib);
  if (problems.empty()) return;
  std::string msg = problems.front().message;
  if (problems.front().loc.line > 0) {
    msg += " (line " + std::to_string(problems.front().loc.line) + ")";
  }
  throw UserError(msg);
}

// Applies one feedback over the group's earliest self-wire; returns the step.
ParseStep apply_self_feedback(Assembly& a, int gi) {
  Group& g = a.groups[static_cast<std::size_t>(gi)];
  int best_wire = -1;
  int best_out = 0;
  int best_in = 0;
  for (std::size_t wi = 0; wi < a.wires.size(); ++wi) {
    const auto& [from, to] = a.wires[wi];
    if (a.group_of.at(from.instance) != gi || a.group_of.at(to.instance) != gi) {
      continue;
    }
    int out_pos = position_of(g.outs, from);
    int in_pos = position_of(g.ins, to);
    if (best_wire < 0 || out_pos < best_out ||
        (out_pos == best_out && in_pos < best_in)) {
      best_wire = static_cast<int>(wi);
      best_out = out_pos;
      best_in = in_pos;
    }
  }
  if (best_wire < 0) throw Error("no self-wire to eliminate");

  ParseStep step;
  step.name = fresh_letter_name(a);
  step.fragment = CircuitTerm::feedback(leaf_for(g), best_out, best_in);
  step.score = Fraction::of(1, 1);

  g.term = CircuitTerm::feedback(g.term, best_out, best_in);
  g.outs.erase(g.outs.begin() + (best_out - 1));
  g.ins.erase(g.ins.begin() + (best_in - 1));
  g.name = step.name;
  g.created = a.next_created++;
  a.used_names.insert(step.name);
  a.wires.erase(a.wires.begin() + best_wire);
  return step;
}

// Merges all upstream->downstream wires into one series construction.
ParseStep apply_series(Assembly& a, int up_gi, int down_gi, Fraction score) {
  Group& up = a.groups[static_cast<std::size_t>(up_gi)];
  Group& down = a.groups[static_cast<std::size_t>(down_gi)];

  std::vector<std::pair<int, int>> port_wires;
  std::vector<std::size_t> consumed;
  for (std::size_t wi = 0; wi < a.wires.size(); ++wi) {
    const auto& [from, to] = a.wires[wi];
    if (a.group_of.at(from.instance) != up_gi ||
        a.group_of.at(to.instance) != down_gi) {
      continue;
    }
    port_wires.push_back({position_of(up.outs, from), position_of(down.ins, to)});
    consumed.push_back(wi);
  }
  SeriesBuild built = build_series(up, down, port_wires);

  ParseStep step;
  step.name = fresh_merge_name(a, down.name + up.name);
  step.fragment = built.fragment;
  step.score = score;

  Group merged;
  merged.name = step.name;
  merged.term = built.real;
  merged.created = a.next_created++;
  merged.ins = std::move(built.ins);
  merged.outs = std::move(built.outs);

  for (auto it = consumed.rbegin(); it != consumed.rend(); ++it) {
    a.wires.erase(a.wires.begin() + static_cast<long>(*it));
  }
  up.alive = false;
  down.alive = false;
  int new_index = static_cast<int>(a.groups.size());
  for (auto& [instance, gi] : a.group_of) {
    if (gi == up_gi || gi == down_gi) gi = new_index;
  }
  a.used_names.insert(step.name);
  a.groups.push_back(std::move(merged));
  return step;
}

ParseResult greedy_loop(Assembly& a) {
  ParseResult result;
  while (!a.wires.empty()) {
    // Score every connected ordered pair of live groups.
    struct Candidate {
      int up = 0, down = 0;
      Fraction score;
      long long up_created = 0, down_created = 0;
    };
    std::map<std::pair<int, int>, int> wire_count;
    for (const auto& [from, to] : a.wires) {
      ++wire_count[{a.group_of.at(from.instance), a.group_of.at(to.instance)}];
    }
    bool have = false;
    Candidate best;
    for (const auto& [pair, count] : wire_count) {
      const auto& [up_gi, down_gi] = pair;
      const Group& up = a.groups[static_cast<std::size_t>(up_gi)];
      const Group& down = a.groups[static_cast<std::size_t>(down_gi)];
      Candidate c;
      c.up = up_gi;
      c.down = down_gi;
      c.up_created = up.created;
      c.down_created = down.created;
      if (up_gi == down_gi) {
        c.score = Fraction::of(1, 1);
      } else {
        long long den = std::max(up.outs.size(), down.ins.size());
        c.score = Fraction::of(count, den);
      }
      bool better = false;
      if (!have) {
        better = true;
      } else {
        int sc = cmp(c.score, best.score);
        if (sc > 0) {
          better = true;
        } else if (sc == 0) {
          better = std::make_pair(c.up_created, c.down_created) <
                   std::make_pair(best.up_created, best.down_created);
        }
      }
      if (better) {
        best = c;
        have = true;
      }
    }
    if (!have) throw Error("wires remain but no scored pair was found");

    if (best.up == best.down) {
      result.trace.steps.push_back(apply_self_feedback(a, best.up));
    } else {
      result.trace.steps.push_back(apply_series(a, best.up, best.down, best.score));
    }
  }

  // Join the disconnected groups (creation order) with the concatenation
  // product.
  std::vector<const Group*> live;
  for (const auto& g : a.groups) {
    if (g.alive) live.push_back(&g);
  }
  std::sort(live.begin(), live.end(),
            [](const Group* x, const Group* y) { return x->created < y->created; });
  std::vector<CircuitTerm> parts;
  for (const Group* g : live) {
    parts.push_back(g->term);
    result.inputs.insert(result.inputs.end(), g->ins.begin(), g->ins.end());
    result.outputs.insert(result.outputs.end(), g->outs.begin(), g->outs.end());
  }
  result.term = concat_chain(std::move(parts));
  return result;
}

ParseResult naive_loop(Assembly& a) {
  ParseResult result;
  Group whole;
  whole.name = "NET";
  std::vector<CircuitTerm> parts;
  for (const auto& g : a.groups) {
    parts.push_back(g.term);
    whole.ins.insert(whole.ins.end(), g.ins.begin(), g.ins.end());
    whole.outs.insert(whole.outs.end(), g.outs.begin(), g.outs.end());
  }
  whole.term = concat_chain(std::move(parts));

  for (const auto& [from, to] : a.wires) {
    int out_pos = position_of(whole.outs, from);
    int in_pos = position_of(whole.ins, to);
    whole.term = CircuitTerm::feedback(whole.term, out_pos, in_pos);
    whole.outs.erase(whole.outs.begin() + (out_pos - 1));
    whole.ins.erase(whole.ins.begin() + (in_pos - 1));
  }
  result.term = whole.term;
  result.inputs = whole.ins;
  result.outputs = whole.outs;
  return result;
}

ParseResult assemble(const Netlist& nl, const ComponentLibrary& lib, bool greedy) {
  require_valid(nl, lib);
  Assembly a = seed_assembly(nl, lib);
  return greedy ? greedy_loop(a) : naive_loop(a);
}

}  // namespace

std::vector<int> positions_in(const std::vector<ExtPort>& from,
                              const std::vector<ExtPort>& to) {
  if (from.size() != to.size()) {
    throw UserError("port lists differ in size; cannot align");
  }
  std::vector<int> sigma;
  std::vector<bool> taken(to.size(), false);
  for (const auto& port : from) {
    bool found = false;
    for (std::size_t k = 0; k < to.size(); ++k) {
      if (!taken[k] && to[k] == port) {
        sigma.push_back(static_cast<int>(k) + 1);
        taken[k] = true;
        found = true;
        break;
      }
    }
    if (!found) {
      throw UserError("port " + port.instance + "#" + std::to_string(port.index) +
                      " missing from the target order");
    }
  }
  return sigma;
}

ReducedModel reduce_netlist(const Netlist& nl, const ComponentLibrary& lib) {
  require_valid(nl, lib);
  ParseResult parsed = netlist_to_term(nl, lib);

  std::map<std::string, SLHTriple> triples;
  ReducedModel model;
  std::map<std::string, std::pair<SpaceKind, int>> space_seen;
  for (const auto& decl : nl.decls) {
    InstantiatedComponent built = lib.instantiate(decl);
    triples.emplace(decl.instance, std::move(built.slh));
    for (const auto& sp : built.spaces) {
      auto it = space_seen.find(sp.label);
      if (it == space_seen.end()) {
        space_seen.emplace(sp.label, std::make_pair(sp.kind, sp.dim));
        model.spaces.push_back(sp);
      } else if (it->second != std::make_pair(sp.kind, sp.dim)) {
        throw UserError("degree of freedom '" + sp.label +
                        "' is declared with conflicting kinds");
      }
    }
  }

  SLHTriple reduced = reduce(parsed.term, [&](const std::string& name) {
    auto it = triples.find(name);
    if (it == triples.end()) throw UserError("unknown component instance: " + name);
    return it->second;
  });

  std::map<std::string, int> decl_order;
  for (std::size_t k = 0; k < nl.decls.size(); ++k) {
    decl_order[nl.decls[k].instance] = static_cast<int>(k);
  }
  auto canonical = [&](std::vector<ExtPort> ports) {
    std::stable_sort(ports.begin(), ports.end(),
                     [&](const ExtPort& x, const ExtPort& y) {
                       auto key = [&](const ExtPort& p) {
                         return std::make_tuple(p.ancilla, decl_order.at(p.instance),
                                                p.index);
                       };
                       return key(x) < key(y);
                     });
    return ports;
  };
  model.inputs = canonical(parsed.inputs);
  model.outputs = canonical(parsed.outputs);

  reduced = permute_outputs(reduced, positions_in(parsed.outputs, model.outputs));
  reduced = permute_inputs(reduced, positions_in(model.inputs, parsed.inputs));
  model.slh = std::move(reduced);
  return model;
}

}  // namespace slh
