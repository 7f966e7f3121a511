#include "slhkit/circuit_algebra.hpp"

#include <algorithm>
#include <cctype>

#include "slhkit/errors.hpp"

namespace slh {

bool operator==(const Arity& a, const Arity& b) {
  return a.n_in == b.n_in && a.n_out == b.n_out;
}

struct CircuitTerm::Node {
  Kind kind = Kind::identity;
  Arity ar;
  std::string name;                   // component
  std::shared_ptr<const Node> a, b;   // left/right or inner
  int i = 0, j = 0;                   // feedback indices
  std::vector<int> sigma;             // perm
  int n = 0;                          // identity
};

namespace {

using NodePtr = std::shared_ptr<const CircuitTerm::Node>;

}  // namespace

CircuitTerm CircuitTerm::component(std::string instance, int n_in, int n_out) {
  if (n_in < 0 || n_out < 0) throw TermError("component arity must be nonnegative");
  if (instance.empty()) throw TermError("component instance name must not be empty");
  auto n = std::make_shared<Node>();
  n->kind = Kind::component;
  n->name = std::move(instance);
  n->ar = {n_in, n_out};
  return CircuitTerm(std::move(n));
}

CircuitTerm CircuitTerm::series(CircuitTerm left, CircuitTerm right) {
  const Arity la = left.arity(), ra = right.arity();
  if (la.n_in != ra.n_out)
    throw TermError("series mismatch: left factor expects " + std::to_string(la.n_in) +
                    " inputs but right factor yields " + std::to_string(ra.n_out) + " outputs");
  auto n = std::make_shared<Node>();
  n->kind = Kind::series;
  n->a = left.node_;
  n->b = right.node_;
  n->ar = {ra.n_in, la.n_out};
  return CircuitTerm(std::move(n));
}

CircuitTerm CircuitTerm::concat(CircuitTerm left, CircuitTerm right) {
  const Arity la = left.arity(), ra = right.arity();
  auto n = std::make_shared<Node>();
  n->kind = Kind::concat;
  n->a = left.node_;
  n->b = right.node_;
  n->ar = {la.n_in + ra.n_in, la.n_out + ra.n_out};
  return CircuitTerm(std::move(n));
}

CircuitTerm CircuitTerm::feedback(CircuitTerm inner, int out_index, int in_index) {
  const Arity a = inner.arity();
  if (out_index < 1 || out_index > a.n_out)
    throw TermError("feedback output index " + std::to_string(out_index) +
                    " out of range 1.." + std::to_string(a.n_out));
  if (in_index < 1 || in_index > a.n_in)
    throw TermError("feedback input index " + std::to_string(in_index) + " out of range 1.." +
                    std::to_string(a.n_in));
  auto n = std::make_shared<Node>();
  n->kind = Kind::feedback;
  n->a = inner.node_;
  n->i = out_index;
  n->j = in_index;
  n->ar = {a.n_in - 1, a.n_out - 1};
  return CircuitTerm(std::move(n));
}

CircuitTerm CircuitTerm::perm(std::vector<int> sigma) {
  const int n_lines = static_cast<int>(sigma.size());
  std::vector<bool> seen(sigma.size(), false);
  for (int v : sigma) {
    if (v < 1 || v > n_lines || seen[v - 1])
      throw TermError("permutation must list each of 1.." + std::to_string(n_lines) +
                      " exactly once");
    seen[v - 1] = true;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::perm;
  n->sigma = std::move(sigma);
  n->ar = {n_lines, n_lines};
  return CircuitTerm(std::move(n));
}

CircuitTerm CircuitTerm::identity(int n_lines) {
  if (n_lines < 0) throw TermError("identity width must be nonnegative");
  auto n = std::make_shared<Node>();
  n->kind = Kind::identity;
  n->n = n_lines;
  n->ar = {n_lines, n_lines};
  return CircuitTerm(std::move(n));
}

CircuitTerm::Kind CircuitTerm::kind() const { return node_->kind; }
Arity CircuitTerm::arity() const { return node_->ar; }

const std::string& CircuitTerm::instance() const {
  if (node_->kind != Kind::component) throw Error("instance() on a non-component term");
  return node_->name;
}

CircuitTerm CircuitTerm::left() const {
  if (node_->kind != Kind::series && node_->kind != Kind::concat)
    throw Error("left() on a leaf term");
  return CircuitTerm(node_->a);
}

CircuitTerm CircuitTerm::right() const {
  if (node_->kind != Kind::series && node_->kind != Kind::concat)
    throw Error("right() on a leaf term");
  return CircuitTerm(node_->b);
}

CircuitTerm CircuitTerm::inner() const {
  if (node_->kind != Kind::feedback) throw Error("inner() on a non-feedback term");
  return CircuitTerm(node_->a);
}

int CircuitTerm::out_index() const {
  if (node_->kind != Kind::feedback) throw Error("out_index() on a non-feedback term");
  return node_->i;
}

int CircuitTerm::in_index() const {
  if (node_->kind != Kind::feedback) throw Error("in_index() on a non-feedback term");
  return node_->j;
}

const std::vector<int>& CircuitTerm::sigma() const {
  if (node_->kind != Kind::perm) throw Error("sigma() on a non-permutation term");
  return node_->sigma;
}

int CircuitTerm::identity_size() const {
  if (node_->kind != Kind::identity) throw Error("identity_size() on a non-identity term");
  return node_->n;
}

bool operator==(const CircuitTerm& a, const CircuitTerm& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case CircuitTerm::Kind::component:
      return a.instance() == b.instance() && a.arity() == b.arity();
    case CircuitTerm::Kind::series:
    case CircuitTerm::Kind::concat:
      return a.left() == b.left() && a.right() == b.right();
    case CircuitTerm::Kind::feedback:
      return a.out_index() == b.out_index() && a.in_index() == b.in_index() &&
             a.inner() == b.inner();
    case CircuitTerm::Kind::perm:
      return a.sigma() == b.sigma();
    case CircuitTerm::Kind::identity:
      return a.identity_size() == b.identity_size();
  }
  return false;
}

// ---------------------------------------------------------------------------
// pretty printing
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kSeriesGlyph = "◁";  // ◁
constexpr const char* kConcatGlyph = "⊞";  // ⊞
constexpr const char* kArrowGlyph = "→";   // →

std::string print_rec(const CircuitTerm& t) {
  using Kind = CircuitTerm::Kind;
  switch (t.kind()) {
    case Kind::component:
      return t.instance();
    case Kind::identity:
      return "I_" + std::to_string(t.identity_size());
    case Kind::perm: {
      std::string s = "P_{(";
      const auto& sigma = t.sigma();
      for (std::size_t k = 0; k < sigma.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(sigma[k]);
      }
      return s + ")}";
    }
    case Kind::feedback:
      return "[" + print_rec(t.inner()) + "]_{" + std::to_string(t.out_index()) + kArrowGlyph +
             std::to_string(t.in_index()) + "}";
    case Kind::series: {
      // right-associative chain; ◁ binds tighter than ⊞
      auto wrap_left = [](const CircuitTerm& c) {
        return c.kind() == Kind::series || c.kind() == Kind::concat;
      };
      auto wrap_right = [](const CircuitTerm& c) { return c.kind() == Kind::concat; };
      const std::string l = print_rec(t.left());
      const std::string r = print_rec(t.right());
      return (wrap_left(t.left()) ? "(" + l + ")" : l) + " " + kSeriesGlyph + " " +
             (wrap_right(t.right()) ? "(" + r + ")" : r);
    }
    case Kind::concat: {
      const std::string l = print_rec(t.left());
      const std::string r = print_rec(t.right());
      return (t.left().kind() == Kind::concat ? "(" + l + ")" : l) + " " + kConcatGlyph + " " + r;
    }
  }
  return {};
}

}  // namespace

std::string pretty_print(const CircuitTerm& t) { return print_rec(t); }

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

namespace {

class TermParser {
 public:
  TermParser(const std::string& text, const std::function<Arity(const std::string&)>& resolve)
      : text_(text), resolve_(resolve) {}

  CircuitTerm parse() {
    CircuitTerm t = parse_concat();
    skip_ws();
    if (pos_ != text_.size())
      throw TermParseError("unexpected trailing input '" + text_.substr(pos_) + "' in term");
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(const char* lit) {
    skip_ws();
    const std::size_t n = std::string_view(lit).size();
    if (text_.compare(pos_, n, lit) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  void expect(const char* lit, const char* what) {
    if (!accept(lit))
      throw TermParseError("expected " + std::string(what) + " near '" +
                           text_.substr(pos_, 12) + "'");
  }

  int parse_int() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) throw TermParseError("expected an integer in term near '" +
                                            text_.substr(start, 12) + "'");
    return std::stoi(text_.substr(start, pos_ - start));
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_'))
        ++pos_;
    }
    if (pos_ == start)
      throw TermParseError("expected a name in term near '" + text_.substr(start, 12) + "'");
    return text_.substr(start, pos_ - start);
  }

  // concat level: series (⊞ series)*, right-associated
  CircuitTerm parse_concat() {
    CircuitTerm first = parse_series();
    std::vector<CircuitTerm> parts{first};
    while (accept(kConcatGlyph) || accept("[+]")) parts.push_back(parse_series());
    CircuitTerm t = parts.back();
    for (std::size_t k = parts.size() - 1; k-- > 0;) t = CircuitTerm::concat(parts[k], t);
    return t;
  }

  // series level: primary (◁ primary)*, right-associated
  CircuitTerm parse_series() {
    std::vector<CircuitTerm> parts{parse_primary()};
    while (accept(kSeriesGlyph) || accept("<|")) parts.push_back(parse_primary());
    CircuitTerm t = parts.back();
    for (std::size_t k = parts.size() - 1; k-- > 0;) t = CircuitTerm::series(parts[k], t);
    return t;
  }

  CircuitTerm parse_feedback_suffix(CircuitTerm inner) {
    expect("_", "'_' after ']'");
    expect("{", "'{'");
    const int i = parse_int();
    if (!accept(kArrowGlyph) && !accept("->"))
      throw TermParseError("expected '->' between feedback indices");
    const int j = parse_int();
    expect("}", "'}'");
    return CircuitTerm::feedback(std::move(inner), i, j);
  }

  CircuitTerm parse_primary() {
    skip_ws();
    if (accept("(")) {
      CircuitTerm t = parse_concat();
      expect(")", "')'");
      return t;
    }
    // '[+]' was consumed at the concat level, so '[' here opens a feedback
    if (accept("[")) {
      CircuitTerm inner = parse_concat();
      expect("]", "']'");
      return parse_feedback_suffix(std::move(inner));
    }
    const std::string name = parse_ident();
    if (name == "fb" && accept("{")) {
      const int i = parse_int();
      expect(",", "','");
      const int j = parse_int();
      expect("}", "'}'");
      expect("(", "'('");
      CircuitTerm inner = parse_concat();
      expect(")", "')'");
      return CircuitTerm::feedback(std::move(inner), i, j);
    }
    if (name == "P_") {
      expect("{", "'{'");
      expect("(", "'('");
      std::vector<int> sigma;
      sigma.push_back(parse_int());
      while (accept(",")) sigma.push_back(parse_int());
      expect(")", "')'");
      expect("}", "'}'");
      return CircuitTerm::perm(std::move(sigma));
    }
    if (name.size() > 2 && name.rfind("I_", 0) == 0 &&
        std::all_of(name.begin() + 2, name.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      return CircuitTerm::identity(std::stoi(name.substr(2)));
    }
    if (name == "I_") return CircuitTerm::identity(parse_int());
    const Arity a = resolve_(name);
    return CircuitTerm::component(name, a.n_in, a.n_out);
  }

  const std::string& text_;
  const std::function<Arity(const std::string&)>& resolve_;
  std::size_t pos_ = 0;
};

}  // namespace

CircuitTerm parse_term(const std::string& text,
                       const std::function<Arity(const std::string&)>& resolve) {
  return TermParser(text, resolve).parse();
}

}  // namespace slh
