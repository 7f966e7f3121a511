#pragma once

#include <map>
#include <string>
#include <vector>

#include "slhkit/gj_parse.hpp"
#include "slhkit/master_eq.hpp"
#include "slhkit/slh.hpp"

namespace slh {

// Structured-data form of a reduced model:
//   { ports: {in, out, names: {inputs: [{name, ancilla}], outputs: [...]}},
//     S: [[opstring]], L: [opstring], H: opstring,
//     spaces: [{label, kind, dim}], symbols: [{name, domain}] }
// Operator entries reuse the canonical rendering, so load(save(x)) == x.
std::string slh_to_json(const SLHTriple& t, const std::vector<LocalSpace>& spaces,
                        const std::vector<ExtPort>& inputs = {},
                        const std::vector<ExtPort>& outputs = {});

std::string reduced_model_to_json(const ReducedModel& model);

struct LoadedSLH {
  SLHTriple slh;
  std::vector<LocalSpace> spaces;
  std::vector<std::string> input_names;   // may be empty
  std::vector<std::string> output_names;  // may be empty
  std::map<std::string, bool> symbols;    // name -> real domain
};

// Throws UserError on malformed documents.
LoadedSLH slh_from_json(const std::string& text);

}  // namespace slh
