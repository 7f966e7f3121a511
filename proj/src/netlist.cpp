#include "slhkit/netlist.hpp"

#include <cctype>
#include <cstdlib>
#include <set>

#include "slhkit/errors.hpp"
#include "slhkit/numfmt.hpp"

namespace slh {

std::string PortRef::str() const {
  return instance + "." + (dir == PortDir::input ? "input" : "output") + std::to_string(index);
}

int cmp(const PortRef& a, const PortRef& b) {
  if (int c = a.instance.compare(b.instance)) return c < 0 ? -1 : 1;
  if (a.dir != b.dir) return a.dir == PortDir::input ? -1 : 1;
  if (a.index != b.index) return a.index < b.index ? -1 : 1;
  return 0;
}

bool operator==(const PortRef& a, const PortRef& b) { return cmp(a, b) == 0; }

ParamExpr ParamExpr::symbol(std::string name) {
  ParamExpr p;
  p.ident = std::move(name);
  return p;
}

ParamExpr ParamExpr::value(double v) {
  ParamExpr p;
  p.numeric = true;
  p.number = v;
  return p;
}

std::string ParamExpr::str() const { return numeric ? format_double(number) : ident; }

bool operator==(const ParamExpr& a, const ParamExpr& b) {
  if (a.numeric != b.numeric) return false;
  return a.numeric ? a.number == b.number : a.ident == b.ident;
}

const ParamExpr* ComponentDecl::find_param(const std::string& name) const {
  for (const auto& [n, v] : params) {
    if (n == name) return &v;
  }
  return nullptr;
}

bool operator==(const ComponentDecl& a, const ComponentDecl& b) {
  return a.type_path == b.type_path && a.instance == b.instance && a.params == b.params;
}

bool operator==(const Connection& a, const Connection& b) {
  return a.from == b.from && a.to == b.to;
}

const ComponentDecl* Netlist::find_decl(const std::string& instance) const {
  for (const auto& d : decls) {
    if (d.instance == instance) return &d;
  }
  return nullptr;
}

bool operator==(const Netlist& a, const Netlist& b) {
  return a.name == b.name && a.decls == b.decls && a.connections == b.connections;
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

namespace {

struct NetToken {
  enum class Kind { ident, number, punct, end };
  Kind kind = Kind::end;
  std::string text;
  double value = 0.0;
  SourceLoc loc;
};

class NetLexer {
 public:
  explicit NetLexer(const std::string& text) : text_(text) { advance(); }

  const NetToken& peek() const { return tok_; }

  NetToken take() {
    NetToken t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw NetlistParseError(msg, tok_.loc.line, tok_.loc.col);
  }

  NetToken expect_ident(const std::string& what) {
    if (tok_.kind != NetToken::Kind::ident) fail("expected " + what + ", got '" + tok_.text + "'");
    return take();
  }

  void expect_punct(const char* p) {
    if (tok_.kind != NetToken::Kind::punct || tok_.text != p)
      fail("expected '" + std::string(p) + "', got '" + tok_.text + "'");
    take();
  }

  bool accept_punct(const char* p) {
    if (tok_.kind == NetToken::Kind::punct && tok_.text == p) {
      take();
      return true;
    }
    return false;
  }

 private:
  void advance() {
    // skip whitespace and // comments
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    tok_ = NetToken{};
    tok_.loc = {line_, col_};
    if (pos_ >= text_.size()) {
      tok_.kind = NetToken::Kind::end;
      tok_.text = "<end of file>";
      return;
    }
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_'))
        ++pos_;
      tok_.kind = NetToken::Kind::ident;
      tok_.text = text_.substr(start, pos_ - start);
      col_ += static_cast<int>(pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < text_.size() &&
         std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
      const char* start = text_.c_str() + pos_;
      char* end = nullptr;
      tok_.value = std::strtod(start, &end);
      tok_.kind = NetToken::Kind::number;
      tok_.text = std::string(start, static_cast<std::size_t>(end - start));
      pos_ += tok_.text.size();
      col_ += static_cast<int>(tok_.text.size());
      return;
    }
    tok_.kind = NetToken::Kind::punct;
    tok_.text = std::string(1, c);
    ++pos_;
    ++col_;
  }

  std::string text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  NetToken tok_;
};

// input<k> / output<k> with k >= 1
bool split_port_name(const std::string& word, PortDir& dir, int& index) {
  std::string digits;
  if (word.rfind("input", 0) == 0) {
    dir = PortDir::input;
    digits = word.substr(5);
  } else if (word.rfind("output", 0) == 0) {
    dir = PortDir::output;
    digits = word.substr(6);
  } else {
    return false;
  }
  if (digits.empty() || digits[0] == '0') return false;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  index = std::stoi(digits);
  return true;
}

}  // namespace

Netlist parse_netlist(const std::string& text) {
  NetLexer lex(text);
  Netlist nl;

  NetToken kw = lex.expect_ident("'model'");
  if (kw.text != "model")
    throw NetlistParseError("expected 'model', got '" + kw.text + "'", kw.loc.line, kw.loc.col);
  nl.name = lex.expect_ident("a model name").text;

  std::set<std::string> instances;

  // declarations until the 'equation' keyword
  while (true) {
    NetToken first = lex.expect_ident("a component type path or 'equation'");
    if (first.text == "equation") break;
    ComponentDecl d;
    d.loc = first.loc;
    d.type_path = first.text;
    while (lex.accept_punct(".")) {
      d.type_path += "." + lex.expect_ident("a path segment").text;
    }
    NetToken inst = lex.expect_ident("an instance name");
    d.instance = inst.text;
    if (!instances.insert(d.instance).second)
      throw NetlistParseError("duplicate instance name '" + d.instance + "'", inst.loc.line,
                              inst.loc.col);
    if (lex.accept_punct("(")) {
      while (true) {
        NetToken pname = lex.expect_ident("a parameter name");
        lex.expect_punct("=");
        ParamExpr value;
        const bool negative = lex.accept_punct("-");
        const NetToken& v = lex.peek();
        if (v.kind == NetToken::Kind::number) {
          value = ParamExpr::value(negative ? -lex.take().value : lex.take().value);
        } else if (!negative && v.kind == NetToken::Kind::ident) {
          value = ParamExpr::symbol(lex.take().text);
        } else {
          lex.fail("expected a parameter value (identifier or number)");
        }
        d.params.emplace_back(pname.text, value);
        if (lex.accept_punct(",")) continue;
        break;
      }
      lex.expect_punct(")");
    }
    lex.expect_punct(";");
    nl.decls.push_back(std::move(d));
  }

  auto parse_portref = [&](PortDir want) -> PortRef {
    NetToken inst = lex.expect_ident("an instance name");
    if (!instances.count(inst.text))
      throw NetlistParseError("connection references undeclared instance '" + inst.text + "'",
                              inst.loc.line, inst.loc.col);
    lex.expect_punct(".");
    NetToken port = lex.expect_ident("a port name");
    PortRef ref;
    ref.instance = inst.text;
    if (!split_port_name(port.text, ref.dir, ref.index))
      throw NetlistParseError("port must be input<k> or output<k> with k >= 1, got '" +
                                  port.text + "'",
                              port.loc.line, port.loc.col);
    if (ref.dir != want)
      throw NetlistParseError(std::string("expected an ") +
                                  (want == PortDir::output ? "output" : "input") +
                                  " port, got '" + port.text + "'",
                              port.loc.line, port.loc.col);
    return ref;
  };

  // connect-equations until 'end'
  while (true) {
    NetToken first = lex.expect_ident("'connect' or 'end'");
    if (first.text == "end") break;
    if (first.text != "connect")
      throw NetlistParseError("expected 'connect' or 'end', got '" + first.text + "'",
                              first.loc.line, first.loc.col);
    Connection c;
    c.loc = first.loc;
    lex.expect_punct("(");
    c.from = parse_portref(PortDir::output);
    lex.expect_punct(",");
    c.to = parse_portref(PortDir::input);
    lex.expect_punct(")");
    lex.expect_punct(";");
    nl.connections.push_back(std::move(c));
  }

  NetToken closing = lex.expect_ident("the model name after 'end'");
  if (closing.text != nl.name)
    throw NetlistParseError("'end " + closing.text + "' does not match 'model " + nl.name + "'",
                            closing.loc.line, closing.loc.col);
  lex.expect_punct(";");
  if (lex.peek().kind != NetToken::Kind::end)
    throw NetlistParseError("unexpected content after 'end " + nl.name + ";'",
                            lex.peek().loc.line, lex.peek().loc.col);
  return nl;
}

std::string serialize_netlist(const Netlist& nl) {
  std::string out = "model " + nl.name + "\n";
  for (const auto& d : nl.decls) {
    out += "  " + d.type_path + " " + d.instance;
    if (!d.params.empty()) {
      out += "(";
      for (std::size_t i = 0; i < d.params.size(); ++i) {
        if (i) out += ",";
        out += d.params[i].first + "=" + d.params[i].second.str();
      }
      out += ")";
    }
    out += ";\n";
  }
  out += "equation\n";
  for (const auto& c : nl.connections) {
    out += "  connect(" + c.from.str() + "," + c.to.str() + ");\n";
  }
  out += "end " + nl.name + ";\n";
  return out;
}

}  // namespace slh
