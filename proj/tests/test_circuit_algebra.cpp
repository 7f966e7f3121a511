#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>

#include "slhkit/circuit_algebra.hpp"
#include "slhkit/errors.hpp"

using namespace slh;

namespace {

CircuitTerm box(const std::string& name, int n_in, int n_out) {
  return CircuitTerm::component(name, n_in, n_out);
}

}  // namespace

TEST_CASE("factories compute arities") {
  const CircuitTerm a = box("A", 2, 3);
  CHECK(a.arity() == Arity{2, 3});
  CHECK(a.kind() == CircuitTerm::Kind::component);
  CHECK(a.instance() == "A");

  const CircuitTerm b = box("B", 3, 1);
  const CircuitTerm s = CircuitTerm::series(b, a);  // B ◁ A
  CHECK(s.arity() == Arity{2, 1});
  CHECK(s.left() == b);
  CHECK(s.right() == a);

  const CircuitTerm c = CircuitTerm::concat(a, b);
  CHECK(c.arity() == Arity{5, 4});

  const CircuitTerm f = CircuitTerm::feedback(a, 3, 1);
  CHECK(f.arity() == Arity{1, 2});
  CHECK(f.out_index() == 3);
  CHECK(f.in_index() == 1);
  CHECK(f.inner() == a);

  const CircuitTerm p = CircuitTerm::perm({2, 3, 1});
  CHECK(p.arity() == Arity{3, 3});
  CHECK(p.sigma() == std::vector<int>{2, 3, 1});

  CHECK(CircuitTerm::identity(4).arity() == Arity{4, 4});
  CHECK(CircuitTerm::identity(0).arity() == Arity{0, 0});
}

TEST_CASE("factories reject ill-formed structure") {
  CHECK_THROWS_AS(CircuitTerm::series(box("A", 2, 1), box("B", 1, 3)), TermError);
  CHECK_THROWS_AS(CircuitTerm::feedback(box("A", 2, 1), 2, 1), TermError);  // out 2 > 1
  CHECK_THROWS_AS(CircuitTerm::feedback(box("A", 2, 1), 1, 3), TermError);  // in 3 > 2
  CHECK_THROWS_AS(CircuitTerm::feedback(box("A", 2, 1), 0, 1), TermError);
  CHECK_THROWS_AS(CircuitTerm::perm({1, 1}), TermError);
  CHECK_THROWS_AS(CircuitTerm::perm({2, 3}), TermError);
  CHECK_THROWS_AS(CircuitTerm::identity(-1), TermError);
  CHECK_THROWS_AS(CircuitTerm::component("", 1, 1), TermError);
  CHECK_THROWS_AS(CircuitTerm::component("A", -1, 1), TermError);
}

TEST_CASE("accessors guard against the wrong kind") {
  const CircuitTerm a = box("A", 1, 1);
  CHECK_THROWS_AS(a.left(), Error);
  CHECK_THROWS_AS(a.sigma(), Error);
  CHECK_THROWS_AS(CircuitTerm::identity(2).instance(), Error);
}

TEST_CASE("the four-block example prints in the documented form") {
  const CircuitTerm a = box("A", 1, 1);
  const CircuitTerm b = box("B", 2, 3);
  const CircuitTerm c = box("C", 3, 2);
  const CircuitTerm d = box("D", 2, 2);

  const CircuitTerm cluster = CircuitTerm::feedback(
      CircuitTerm::series(
          CircuitTerm::concat(CircuitTerm::identity(2), CircuitTerm::feedback(d, 1, 2)),
          CircuitTerm::series(b, c)),
      3, 3);
  const CircuitTerm t = CircuitTerm::concat(a, cluster);

  CHECK(t.arity() == Arity{3, 3});
  CHECK(pretty_print(t) == "A ⊞ [(I_2 ⊞ [D]_{1→2}) ◁ B ◁ C]_{3→3}");
}

TEST_CASE("printing disambiguates nesting with parentheses") {
  const CircuitTerm a = box("A", 1, 1);
  const CircuitTerm b = box("B", 1, 1);
  const CircuitTerm c = box("C", 1, 1);

  // ◁ binds tighter than ⊞
  CHECK(pretty_print(CircuitTerm::concat(a, CircuitTerm::series(b, c))) == "A ⊞ B ◁ C");
  CHECK(pretty_print(CircuitTerm::series(box("W", 2, 1), CircuitTerm::concat(b, c))) ==
        "W ◁ (B ⊞ C)");
  // left-associated chains need parentheses, right-associated ones do not
  CHECK(pretty_print(CircuitTerm::series(CircuitTerm::series(a, b), c)) == "(A ◁ B) ◁ C");
  CHECK(pretty_print(CircuitTerm::series(a, CircuitTerm::series(b, c))) == "A ◁ B ◁ C");
  CHECK(pretty_print(CircuitTerm::concat(CircuitTerm::concat(a, b), c)) == "(A ⊞ B) ⊞ C");
  CHECK(pretty_print(CircuitTerm::concat(a, CircuitTerm::concat(b, c))) == "A ⊞ B ⊞ C");
  CHECK(pretty_print(CircuitTerm::perm({3, 1, 2})) == "P_{(3,1,2)}");
}

namespace {

struct TermGen {
  std::mt19937_64& rng;
  std::map<std::string, Arity>& names;
  int next_id = 1;

  int pick(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng);
  }

  CircuitTerm fresh_component(int n_in, int n_out) {
    const std::string name = "C" + std::to_string(next_id++);
    names[name] = Arity{n_in, n_out};
    return CircuitTerm::component(name, n_in, n_out);
  }

  CircuitTerm leaf() {
    switch (pick(0, 3)) {
      case 0:
        return CircuitTerm::identity(pick(1, 3));
      case 1: {
        std::vector<int> sigma(static_cast<std::size_t>(pick(1, 4)));
        for (std::size_t k = 0; k < sigma.size(); ++k) sigma[k] = static_cast<int>(k) + 1;
        std::shuffle(sigma.begin(), sigma.end(), rng);
        return CircuitTerm::perm(std::move(sigma));
      }
      default:
        return fresh_component(pick(1, 3), pick(1, 3));
    }
  }

  CircuitTerm gen(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(0, 3)) {
      case 0:
        return CircuitTerm::concat(gen(depth - 1), gen(depth - 1));
      case 1: {
        CircuitTerm right = gen(depth - 1);
        const int mid = right.arity().n_out;
        CircuitTerm left = (mid >= 1 && pick(0, 1)) ? CircuitTerm::identity(mid)
                                                    : fresh_component(mid, pick(1, 3));
        return CircuitTerm::series(std::move(left), std::move(right));
      }
      case 2: {
        CircuitTerm inner = gen(depth - 1);
        const Arity a = inner.arity();
        if (a.n_in < 1 || a.n_out < 1) return leaf();
        return CircuitTerm::feedback(std::move(inner), pick(1, a.n_out), pick(1, a.n_in));
      }
      default:
        return leaf();
    }
  }
};

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

}  // namespace

TEST_CASE("random terms round-trip through print and parse") {
  std::mt19937_64 rng(11);
  std::map<std::string, Arity> names;
  TermGen gen{rng, names};
  auto resolve = [&names](const std::string& n) -> Arity {
    auto it = names.find(n);
    if (it == names.end()) throw TermParseError("unknown component '" + n + "'");
    return it->second;
  };

  for (int k = 0; k < 150; ++k) {
    const CircuitTerm t = gen.gen(3);
    const std::string text = pretty_print(t);
    const CircuitTerm back = parse_term(text, resolve);
    CHECK(back == t);
    CHECK(pretty_print(back) == text);

    // the ASCII spelling parses to the same term
    const std::string ascii =
        replace_all(replace_all(replace_all(text, "◁", "<|"), "⊞", "[+]"), "→", "->");
    CHECK(parse_term(ascii, resolve) == t);
  }
}

TEST_CASE("the parser accepts explicit feedback and identity spellings") {
  auto resolve = [](const std::string& n) -> Arity {
    if (n == "A") return Arity{2, 2};
    throw TermParseError("unknown component '" + n + "'");
  };
  const CircuitTerm fb = CircuitTerm::feedback(box("A", 2, 2), 1, 2);
  CHECK(parse_term("fb{1,2}(A)", resolve) == fb);
  CHECK(parse_term("[A]_{1->2}", resolve) == fb);
  CHECK(parse_term("[A]_{1→2}", resolve) == fb);
  CHECK(parse_term("I_3", resolve) == CircuitTerm::identity(3));
  CHECK(parse_term("P_{(2,1)}", resolve) == CircuitTerm::perm({2, 1}));
  CHECK(parse_term("A <| (I_1 [+] I_1)", resolve) ==
        CircuitTerm::series(box("A", 2, 2),
                            CircuitTerm::concat(CircuitTerm::identity(1),
                                                CircuitTerm::identity(1))));
}

TEST_CASE("parse errors name the offending fragment") {
  auto resolve = [](const std::string& n) -> Arity {
    if (n == "A") return Arity{1, 1};
    throw TermParseError("unknown component '" + n + "'");
  };
  CHECK_THROWS_AS(parse_term("A ◁", resolve), TermParseError);
  CHECK_THROWS_AS(parse_term("B", resolve), TermParseError);
  CHECK_THROWS_AS(parse_term("A extra", resolve), TermParseError);
  CHECK_THROWS_AS(parse_term("[A]_{1}", resolve), TermParseError);
  CHECK_THROWS_AS(parse_term("(A", resolve), TermParseError);
  // structural errors surface through the factories
  CHECK_THROWS_AS(parse_term("A ◁ (A ⊞ A)", resolve), TermError);
}

TEST_CASE("structural equality distinguishes shape and labels") {
  const CircuitTerm a = box("A", 1, 1);
  const CircuitTerm b = box("B", 1, 1);
  CHECK(a == a);
  CHECK_FALSE(a == b);
  CHECK_FALSE(a == box("A", 1, 2));
  CHECK(CircuitTerm::concat(a, b) == CircuitTerm::concat(a, b));
  CHECK_FALSE(CircuitTerm::concat(a, b) == CircuitTerm::concat(b, a));
  CHECK_FALSE(CircuitTerm::feedback(box("A", 2, 2), 1, 1) ==
              CircuitTerm::feedback(box("A", 2, 2), 1, 2));
  CHECK_FALSE(CircuitTerm::identity(2) == CircuitTerm::perm({1, 2}));
}
