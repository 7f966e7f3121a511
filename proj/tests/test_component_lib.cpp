#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slhkit/component_lib.hpp"
#include "slhkit/errors.hpp"
#include "slhkit/op_parse.hpp"

using namespace slh;

namespace {

ComponentDecl decl(const std::string& type_path, const std::string& instance,
                   const Params& params = {}) {
  ComponentDecl d;
  d.type_path = type_path;
  d.instance = instance;
  d.params = params;
  return d;
}

const std::string kBS = "Photonics.Components.Beamsplitter";
const std::string kLoss = "Photonics.Components.Loss";
const std::string kField = "Photonics.Components.CoherentField";
const std::string kPhase = "Photonics.Components.Phase";
const std::string kCavity = "Photonics.Components.SingleCavity";
const std::string kIdentity = "Photonics.Components.Identity";
const std::string kPerm = "Photonics.Components.Permutation";
const std::string kStatic = "Photonics.Components.Static";

}  // namespace

TEST_CASE("the builtin set registers the documented type paths") {
  const ComponentLibrary lib = ComponentLibrary::builtins();
  for (const std::string& p :
       {kBS, kLoss, kField, kPhase, kCavity, kIdentity, kPerm, kStatic}) {
    CHECK(lib.has(p));
  }
  CHECK_FALSE(lib.has("Photonics.Components.Nonexistent"));
  CHECK(lib.type_paths().size() == 8);
  CHECK_THROWS_AS(lib.at("No.Such"), UserError);
}

TEST_CASE("a beamsplitter instantiates as a rotation block") {
  const ComponentLibrary lib = ComponentLibrary::builtins();
  const InstantiatedComponent bs =
      lib.instantiate(decl(kBS, "BS", {{"Theta", ParamExpr::symbol("theta")}}));

  CHECK(bs.ports.visible_in == 2);
  CHECK(bs.ports.full_out == 2);
  CHECK(bs.spaces.empty());
  const ScalarExpr c = ScalarExpr::cos(LinArg::symbol("theta"));
  const ScalarExpr s = ScalarExpr::sin(LinArg::symbol("theta"));
  CHECK(bs.slh.s(0, 0) == OperatorExpr(c));
  CHECK(bs.slh.s(0, 1) == -OperatorExpr(s));
  CHECK(bs.slh.s(1, 0) == OperatorExpr(s));
  CHECK(bs.slh.s(1, 1) == OperatorExpr(c));
  CHECK(bs.slh.L[0].is_zero());
  CHECK(bs.slh.L[1].is_zero());
  CHECK(bs.slh.H.is_zero());

  // a numeric angle folds to numbers
  const InstantiatedComponent n =
      lib.instantiate(decl(kBS, "BS", {{"Theta", ParamExpr::value(0.25)}}));
  CHECK(n.slh.s(1, 0) == OperatorExpr(std::sin(0.25)));
}

TEST_CASE("a loss tap shows one line to the netlist and two to the physics") {
  const ComponentLibrary lib = ComponentLibrary::builtins();
  const ComponentDecl d = decl(kLoss, "Lz1", {{"LossParam", ParamExpr::symbol("theta")}});
  CHECK(lib.profile(d).visible_in == 1);
  CHECK(lib.profile(d).visible_out == 1);
  CHECK(lib.profile(d).full_in == 2);
  CHECK(lib.profile(d).full_out == 2);

  const InstantiatedComponent tap = lib.instantiate(d);
  CHECK(tap.slh.n_in == 2);
  CHECK(tap.slh.n_out == 2);
  CHECK(tap.slh.s(0, 0) == OperatorExpr(ScalarExpr::cos(LinArg::symbol("theta"))));
  CHECK(tap.slh.s(1, 0) == OperatorExpr(ScalarExpr::sin(LinArg::symbol("theta"))));
}

TEST_CASE("a coherent field is a displacement on one line") {
  const ComponentLibrary lib = ComponentLibrary::builtins();
  const InstantiatedComponent w =
      lib.instantiate(decl(kField, "W", {{"Amplitude", ParamExpr::symbol("alpha")}}));
  CHECK(w.ports.full_in == 1);
  CHECK(w.slh.s(0, 0) == OperatorExpr(1.0));
  CHECK(w.slh.L[0] == OperatorExpr(ScalarExpr::symbol("alpha", false)));  // complex domain
  CHECK(w.slh.H.is_zero());

  const InstantiatedComponent num =
      lib.instantiate(decl(kField, "W", {{"Amplitude", ParamExpr::value(2.0)}}));
  CHECK(num.slh.L[0] == OperatorExpr(2.0));
}

TEST_CASE("a phase shifter scatters through a unit complex factor") {
  const ComponentLibrary lib = ComponentLibrary::builtins();
  const InstantiatedComponent p =
      lib.instantiate(decl(kPhase, "P", {{"Phi", ParamExpr::symbol("phi")}}));
  CHECK(p.slh.s(0, 0) == OperatorExpr(ScalarExpr::expi(LinArg::symbol("phi"))));
}

TEST_CASE("a Z-probe cavity reflects with a conditional sign") {
  const ComponentLibrary lib = ComponentLibrary::builtins();
  const InstantiatedComponent q = lib.instantiate(decl(
      kCavity, "Q1",
      {{"CavityType", ParamExpr::symbol("Zprobe")}, {"HilbertSpace", ParamExpr::symbol("QA")}}));
  CHECK(q.slh.s(0, 0) == OperatorExpr::pauli_z("QA"));
  REQUIRE(q.spaces.size() == 1);
  CHECK(q.spaces[0].label == "QA");
  CHECK(q.spaces[0].kind == SpaceKind::qubit);
  CHECK(q.spaces[0].dim == 2);

  // the space label defaults to the instance name
  const InstantiatedComponent def =
      lib.instantiate(decl(kCavity, "Q7", {{"CavityType", ParamExpr::symbol("Zprobe")}}));
  CHECK(def.slh.s(0, 0) == OperatorExpr::pauli_z("Q7"));
  CHECK(def.spaces[0].label == "Q7");
}

TEST_CASE("identity, permutation and static blocks are pure rewiring") {
  const ComponentLibrary lib = ComponentLibrary::builtins();

  const InstantiatedComponent id =
      lib.instantiate(decl(kIdentity, "I", {{"Lines", ParamExpr::value(3)}}));
  CHECK(id.slh == SLHTriple::identity(3));
  CHECK(id.ports.full_in == 3);

  const InstantiatedComponent perm =
      lib.instantiate(decl(kPerm, "P", {{"Sigma", ParamExpr::value(231)}}));
  CHECK(perm.slh == permutation_slh({2, 3, 1}));
  CHECK(perm.ports.visible_in == 3);
  CHECK_THROWS_AS(lib.instantiate(decl(kPerm, "P", {{"Sigma", ParamExpr::value(10)}})),
                  UserError);

  const InstantiatedComponent st = lib.instantiate(
      decl(kStatic, "B",
           {{"Inputs", ParamExpr::value(2)}, {"Outputs", ParamExpr::value(3)}}));
  CHECK(st.slh.n_in == 2);
  CHECK(st.slh.n_out == 3);
  CHECK(st.slh.s(0, 0) == OperatorExpr(1.0));
  CHECK(st.slh.s(1, 1) == OperatorExpr(1.0));
  CHECK(st.slh.s(2, 0).is_zero());
  CHECK(st.slh.s(2, 1).is_zero());
  CHECK(st.ports.visible_out == 3);
}

TEST_CASE("parameter schemas catch declaration mistakes") {
  const ComponentLibrary lib = ComponentLibrary::builtins();
  auto problems = [&](const ComponentDecl& d) { return lib.param_problems(d); };

  CHECK(problems(decl(kBS, "BS", {{"Theta", ParamExpr::value(0.1)}})).empty());

  auto one = [&](const ComponentDecl& d, const std::string& fragment) {
    const auto msgs = problems(d);
    REQUIRE(msgs.size() == 1);
    CHECK(msgs[0].find(fragment) != std::string::npos);
  };

  one(decl("No.Such.Type", "A"), "unknown component type");
  one(decl(kBS, "BS"), "missing required parameter 'Theta'");
  one(decl(kBS, "BS", {{"Theta", ParamExpr::value(0.1)}, {"Tilt", ParamExpr::value(1)}}),
      "has no parameter 'Tilt'");
  one(decl(kBS, "BS",
           {{"Theta", ParamExpr::value(0.1)}, {"Theta", ParamExpr::value(0.2)}}),
      "given more than once");
  one(decl(kCavity, "Q", {{"CavityType", ParamExpr::symbol("Xprobe")}}),
      "must be one of {Zprobe}");
  one(decl(kCavity, "Q",
           {{"CavityType", ParamExpr::symbol("Zprobe")},
            {"HilbertSpace", ParamExpr::value(3)}}),
      "must be an identifier");
  one(decl(kIdentity, "I", {{"Lines", ParamExpr::value(-1)}}), "nonnegative integer");
  one(decl(kIdentity, "I", {{"Lines", ParamExpr::value(1.5)}}), "nonnegative integer");
  one(decl(kIdentity, "I", {{"Lines", ParamExpr::symbol("n")}}), "must be a number");

  CHECK_THROWS_AS(lib.instantiate(decl(kBS, "BS")), UserError);
  CHECK_THROWS_AS(lib.profile(decl(kBS, "BS")), UserError);
}

TEST_CASE("registering the same type path twice is rejected") {
  ComponentLibrary lib = ComponentLibrary::builtins();
  ComponentModel m;
  m.type_path = kBS;
  CHECK_THROWS_AS(lib.add(std::move(m)), UserError);
}

TEST_CASE("scalar conversion respects the declared domain") {
  CHECK(param_to_scalar(ParamExpr::value(1.5), true) == ScalarExpr(1.5));
  CHECK(param_to_scalar(ParamExpr::symbol("g"), true) == ScalarExpr::symbol("g"));
  CHECK(param_to_scalar(ParamExpr::symbol("g"), false) == ScalarExpr::symbol("g", false));
  CHECK_FALSE(param_to_scalar(ParamExpr::symbol("g"), false) == ScalarExpr::symbol("g"));
}

namespace {

const char* kManifest = R"json({
  "components": [
    {
      "type": "Local.TwoLevelMirror",
      "params": [
        {"name": "Kappa", "kind": "real"},
        {"name": "Drive", "kind": "complex", "required": false}
      ],
      "inputs": 1,
      "outputs": 1,
      "S": [["Z[$instance]"]],
      "L": ["Kappa*sm[$instance]"],
      "H": "Drive*sp[$instance] + conj(Drive)*sm[$instance]",
      "spaces": [{"label": "$instance", "kind": "qubit"}]
    },
    {
      "type": "Local.TapWithMonitor",
      "inputs": 1,
      "outputs": 1,
      "ancilla_inputs": 1,
      "ancilla_outputs": 1,
      "S": [["1", "0"], ["0", "1"]],
      "L": ["0", "0"]
    }
  ]
})json";

}  // namespace

TEST_CASE("manifest components instantiate with parameter binding") {
  ComponentLibrary lib = ComponentLibrary::builtins();
  lib.load_manifest(kManifest);
  REQUIRE(lib.has("Local.TwoLevelMirror"));
  REQUIRE(lib.has("Local.TapWithMonitor"));

  SUBCASE("symbolic and numeric parameters substitute into the operator text") {
    const InstantiatedComponent m = lib.instantiate(
        decl("Local.TwoLevelMirror", "M1",
             {{"Kappa", ParamExpr::value(0.5)}, {"Drive", ParamExpr::symbol("beta")}}));
    CHECK(m.slh.s(0, 0) == OperatorExpr::pauli_z("M1"));
    CHECK(m.slh.L[0] == OperatorExpr(0.5) * OperatorExpr::sigma_minus("M1"));
    CHECK(m.slh.H == parse_operator("beta*sp[M1] + conj(beta)*sm[M1]", {"beta"}));
    REQUIRE(m.spaces.size() == 1);
    CHECK(m.spaces[0].label == "M1");
    CHECK(m.spaces[0].dim == 2);
  }

  SUBCASE("omitted optional parameters stay as free symbols") {
    const InstantiatedComponent m = lib.instantiate(
        decl("Local.TwoLevelMirror", "M2", {{"Kappa", ParamExpr::symbol("kappa")}}));
    CHECK(m.slh.L[0] ==
          OperatorExpr(ScalarExpr::symbol("kappa")) * OperatorExpr::sigma_minus("M2"));
    CHECK(m.slh.H == parse_operator("Drive*sp[M2] + conj(Drive)*sm[M2]", {"Drive"}));
  }

  SUBCASE("ancilla ports widen the full arity but not the visible one") {
    const ComponentDecl d = decl("Local.TapWithMonitor", "T");
    const PortProfile p = lib.profile(d);
    CHECK(p.visible_in == 1);
    CHECK(p.visible_out == 1);
    CHECK(p.full_in == 2);
    CHECK(p.full_out == 2);
    CHECK(lib.instantiate(d).slh == SLHTriple::identity(2));
  }

  SUBCASE("schema checks also apply to manifest components") {
    CHECK_THROWS_AS(lib.instantiate(decl("Local.TwoLevelMirror", "M")), UserError);
    const auto msgs = lib.param_problems(
        decl("Local.TwoLevelMirror", "M", {{"Kappa", ParamExpr::value(1)},
                                           {"Extra", ParamExpr::value(1)}}));
    REQUIRE(msgs.size() == 1);
    CHECK(msgs[0].find("has no parameter 'Extra'") != std::string::npos);
  }
}

TEST_CASE("malformed manifests are rejected with a reason") {
  auto load = [](const std::string& text) {
    ComponentLibrary lib = ComponentLibrary::builtins();
    lib.load_manifest(text);
  };

  CHECK_THROWS_WITH_AS(load("not json"), doctest::Contains("not valid JSON"), UserError);
  CHECK_THROWS_WITH_AS(load(R"({"components": 5})"),
                       doctest::Contains("'components' array"), UserError);
  CHECK_THROWS_WITH_AS(load(R"({"components": [{}]})"), doctest::Contains("'type'"),
                       UserError);
  CHECK_THROWS_WITH_AS(
      load(
          R"({"components": [{"type": "X", "inputs": 1, "outputs": 1, "S": [["1"]], "L": ["Z["]}]})"),
      doctest::Contains("bad operator text"), UserError);
  CHECK_THROWS_WITH_AS(
      load(R"({"components": [{"type": "X", "inputs": 2, "outputs": 1, "S": [["1"]]}]})"),
      doctest::Contains("one column per input"), UserError);
  CHECK_THROWS_WITH_AS(
      load(R"({"components": [{"type": "X", "outputs": 2, "S": [["1"]], "L": ["0", "0"]}]})"),
      doctest::Contains("one row per output"), UserError);
  CHECK_THROWS_WITH_AS(
      load(R"({"components": [{"type": "X", "params": [{"name": "P", "kind": "banana"}]}]})"),
      doctest::Contains("unknown parameter kind"), UserError);
  // registering over a builtin type path collides
  CHECK_THROWS_WITH_AS(
      load(R"({"components": [{"type": "Photonics.Components.Phase"}]})"),
      doctest::Contains("already registered"), UserError);
}
