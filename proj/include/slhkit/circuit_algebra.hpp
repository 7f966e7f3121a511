#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace slh {

struct Arity {
  int n_in = 0;
  int n_out = 0;
};

bool operator==(const Arity& a, const Arity& b);

// ---------------------------------------------------------------------------
// CircuitTerm: immutable term tree of the circuit algebra.
//
//   component   named box with fixed arity
//   series      left ◁ right — every output of right feeds the matching
//               input of left (signal flows right-to-left, like composition)
//   concat      left ⊞ right — parallel composition, left's ports first
//   feedback    [inner]_{i→j} — output i loops back into input j
//   perm        P_σ — n-line rewiring, input l exits at output σ(l)
//   identity    I_n — n parallel pass-through lines
//
// Factories validate structure (series arity match, feedback index ranges,
// permutation well-formedness) and cache the resulting arity, so every
// reachable term is well-formed by construction.
// ---------------------------------------------------------------------------
class CircuitTerm {
 public:
  enum class Kind { component, series, concat, feedback, perm, identity };

  CircuitTerm() : CircuitTerm(identity(0)) {}

  static CircuitTerm component(std::string instance, int n_in, int n_out);
  static CircuitTerm series(CircuitTerm left, CircuitTerm right);
  static CircuitTerm concat(CircuitTerm left, CircuitTerm right);
  static CircuitTerm feedback(CircuitTerm inner, int out_index, int in_index);  // 1-based
  static CircuitTerm perm(std::vector<int> sigma);  // 1-based images
  static CircuitTerm identity(int n);

  Kind kind() const;
  Arity arity() const;

  const std::string& instance() const;  // component
  CircuitTerm left() const;              // series/concat
  CircuitTerm right() const;             // series/concat
  CircuitTerm inner() const;             // feedback
  int out_index() const;                    // feedback
  int in_index() const;                     // feedback
  const std::vector<int>& sigma() const;    // perm
  int identity_size() const;                // identity

  struct Node;  // definition private to the implementation file

 private:
  explicit CircuitTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

bool operator==(const CircuitTerm& a, const CircuitTerm& b);  // structural

// Infix rendering with ◁ binding tighter than ⊞ and parentheses exactly where
// re-parsing needs them, e.g. "A ⊞ [(I_2 ⊞ [D]_{1→2}) ◁ B ◁ C]_{3→3}".
std::string pretty_print(const CircuitTerm& t);

// Inverse of pretty_print.  Also accepts the ASCII aliases "<|" for ◁,
// "[+]" for ⊞, "->" for →, and "fb{i,j}(...)" for feedback.  Component names
// are resolved to arities through the callback (which should throw
// TermParseError for unknown names).  The names I_<n>, P_, and fb are
// reserved by the grammar.
CircuitTerm parse_term(const std::string& text,
                       const std::function<Arity(const std::string&)>& resolve);

}  // namespace slh
