#include <doctest.h>

#include <string>

#include "sdr/model.hpp"

using namespace sdr;

namespace {

const char* kDiskModel = R"({
  "vars": ["x1", "x2"],
  "sets": {
    "disk": {
      "lmi": {
        "dim": 2,
        "A0": [[1, 0], [0, 1]],
        "coeffs": {
          "x1": [[-1, 0], [0, 1]],
          "x2": [[0, 1], [1, 0]]
        }
      }
    },
    "open_disk": {"relint": "disk"},
    "pole": {"exposed_face": {"s": "disk", "l": "1 - x1"}},
    "no_pole": {"remove_face": {"s": "disk", "l": "1 - x1"}},
    "disk_with_pole": {"ker_subset": {"s": "disk", "w": [[1, 0]]}}
  }
})";

// every node kind at once, for the round-trip property
const char* kAllKinds = R"({
  "vars": ["x1", "x2"],
  "sets": {
    "disk": {
      "lmi": {
        "dim": 2,
        "A0": [[1, 0], [0, 1]],
        "coeffs": {"x1": [[-1, 0], [0, 1]], "x2": [[0, 1], [1, 0]]}
      }
    },
    "half": {"poly": ["-x2", "1 - x1"]},
    "open_disk": {"relint": "disk"},
    "pole": {"exposed_face": {"s": "disk", "l": "1 - x1"}},
    "no_pole": {"remove_face": {"s": "disk", "l": "1 - x1"}},
    "pinned": {"ker_subset": {"s": "disk", "w": [[1, 0]]}},
    "kept": {"looparrow": {"t": "pole", "s": "disk"}},
    "tee": {"intersect": ["disk", "half"]},
    "hull": {"conv_union": ["disk", "halfdisk"]},
    "halfdisk": {"intersect": ["disk", "half"]},
    "shadow": {"project": {"s": "tee", "keep": ["x1"]}}
  }
})";

ErrorCode code_of(const std::string& text) {
  try {
    parse_model(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return ErrorCode::InvalidInput;
}

}  // namespace

TEST_CASE("parsing the disk model") {
  SetModel m = parse_model(kDiskModel);
  CHECK(m.vars == std::vector<std::string>{"x1", "x2"});
  CHECK(m.definitions.size() == 5);
  CHECK(m.warnings.empty());

  const SetNode& disk = m.definitions.at("disk");
  CHECK(disk.kind == NodeKind::Lmi);
  CHECK(disk.lmi.dim == 2);
  CHECK(disk.lmi.coeff_of("x1").at(0, 0) == -1);

  const SetNode& open_disk = m.definitions.at("open_disk");
  CHECK(open_disk.kind == NodeKind::Relint);
  CHECK(open_disk.refs == std::vector<std::string>{"disk"});

  const SetNode& pole = m.definitions.at("pole");
  CHECK(pole.kind == NodeKind::ExposedFace);
  CHECK(pole.l.evaluate({{"x1", 1.0}}) == doctest::Approx(0));

  const SetNode& pinned = m.definitions.at("disk_with_pole");
  CHECK(pinned.kind == NodeKind::KerSubset);
  REQUIRE(pinned.w_columns.size() == 1);
  CHECK(pinned.w_columns[0] == std::vector<double>{1, 0});
}

TEST_CASE("parse errors carry their own codes") {
  // malformed JSON: syntax error with line/column
  try {
    parse_model("{\n  \"vars\": [,]\n}");
    FAIL("expected SyntaxError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  // undefined reference
  CHECK(code_of(R"({"vars": ["x1"], "sets": {"a": {"relint": "missing"}}})") ==
        ErrorCode::UndefinedReference);

  // reference cycle
  CHECK(code_of(R"({"vars": ["x1"], "sets": {
          "a": {"relint": "b"}, "b": {"relint": "a"}}})") ==
        ErrorCode::CycleError);

  // self-cycle
  CHECK(code_of(R"({"vars": ["x1"], "sets": {"a": {"relint": "a"}}})") ==
        ErrorCode::CycleError);

  // coefficient for an undeclared variable
  CHECK(code_of(R"({"vars": ["x1"], "sets": {"a": {"lmi": {
          "dim": 1, "A0": [[1]], "coeffs": {"zz": [[1]]}}}}})") ==
        ErrorCode::VariableMismatch);

  // A0 shape mismatch
  CHECK(code_of(R"({"vars": ["x1"], "sets": {"a": {"lmi": {
          "dim": 2, "A0": [[1]], "coeffs": {"x1": [[1]]}}}}})") ==
        ErrorCode::DimensionMismatch);

  // ker_subset columns of unequal length
  CHECK(code_of(R"({"vars": ["x1"], "sets": {
          "d": {"lmi": {"dim": 2, "A0": [[1,0],[0,1]], "coeffs": {"x1": [[1,0],[0,0]]}}},
          "a": {"ker_subset": {"s": "d", "w": [[1, 0], [1]]}}}})") ==
        ErrorCode::DimensionMismatch);

  // reserved names
  CHECK(code_of(R"({"vars": ["_aux1"], "sets": {}})") == ErrorCode::InvalidInput);

  // duplicate variable
  CHECK(code_of(R"({"vars": ["x1", "x1"], "sets": {}})") == ErrorCode::SyntaxError);

  // a node needs exactly one kind key
  CHECK(code_of(R"({"vars": ["x1"], "sets": {"a": {}}})") == ErrorCode::SyntaxError);
  CHECK(code_of(R"({"vars": ["x1"], "sets": {
          "d": {"lmi": {"dim": 1, "A0": [[1]], "coeffs": {}}, "relint": "d"}}})") ==
        ErrorCode::SyntaxError);
}

TEST_CASE("asymmetric matrices are symmetrized with a warning") {
  SetModel m = parse_model(R"({"vars": ["x1"], "sets": {"a": {"lmi": {
      "dim": 2, "A0": [[1, 0.2], [0, 1]], "coeffs": {"x1": [[1, 0], [0, 1]]}}}}})");
  REQUIRE_FALSE(m.warnings.empty());
  CHECK(m.warnings[0].find("symmetrized") != std::string::npos);
  CHECK(m.definitions.at("a").lmi.a0.at(0, 1) == doctest::Approx(0.1));
  CHECK(m.definitions.at("a").lmi.a0.at(1, 0) == doctest::Approx(0.1));
}

TEST_CASE("serialize and reparse is structurally identical") {
  for (const char* text : {kDiskModel, kAllKinds}) {
    SetModel m = parse_model(text);
    const std::string out = serialize_model(m);
    SetModel again = parse_model(out);
    CHECK(model_equal(m, again));
    // and the serialization itself is stable
    CHECK(serialize_model(again) == out);
  }
  SetModel a = parse_model(kDiskModel);
  SetModel b = parse_model(kAllKinds);
  CHECK_FALSE(model_equal(a, b));
}

TEST_CASE("elaboration builds working representations with stable caching") {
  SetModel m = parse_model(kDiskModel);
  ModelElaborator el(m, EngineConfig{});

  const SemidefRepresentation& disk = el.elaborate("disk");
  CHECK(disk.pencil.dim == 2);
  CHECK(disk.auxiliary.empty());

  const SemidefRepresentation& open_disk = el.elaborate("open_disk");
  CHECK(open_disk.pencil.dim == 6);
  CHECK(open_disk.auxiliary.size() == 3);
  CHECK(open_disk.relint_count == 1);

  // memoized: the same reference comes back
  CHECK(&el.elaborate("open_disk") == &open_disk);
  CHECK(&el.elaborate("disk") == &disk);

  const SemidefRepresentation& pinned = el.elaborate("disk_with_pole");
  CHECK(pinned.pencil.dim == 2 + 1);  // albert block with q = 1
  CHECK(pinned.auxiliary.size() == 1);

  EngineConfig cfg;
  CHECK(membership(el.elaborate("no_pole"), {{"x1", 0.0}, {"x2", 0.0}}, cfg).kind ==
        VerdictKind::In);
  CHECK(membership(el.elaborate("no_pole"), {{"x1", 1.0}, {"x2", 0.0}}, cfg).kind ==
        VerdictKind::Out);
  CHECK(membership(el.elaborate("pole"), {{"x1", 1.0}, {"x2", 0.0}}, cfg).kind ==
        VerdictKind::In);
}

TEST_CASE("dependencies and closure walk the reference graph") {
  SetModel m = parse_model(kAllKinds);
  ModelElaborator el(m, EngineConfig{});

  CHECK(el.dependencies("disk").empty());
  CHECK(el.dependencies("open_disk") == std::vector<std::string>{"disk"});
  CHECK(el.dependencies("kept") == std::vector<std::string>{"pole", "disk"});

  // dependencies come before dependents
  std::vector<std::string> order = el.closure("kept");
  REQUIRE(order.size() == 3);
  CHECK(order.back() == "kept");
  CHECK((order[0] == "disk" || order[1] == "disk"));

  const std::vector<std::string> shadow = el.closure("shadow");
  CHECK(shadow.size() == 4);  // disk, half, tee, shadow

  // looparrow over an intersected T elaborates and answers
  const SemidefRepresentation& kept = el.elaborate("kept");
  EngineConfig cfg;
  CHECK(membership(kept, {{"x1", 1.0}, {"x2", 0.0}}, cfg).kind == VerdictKind::In);
  CHECK(membership(kept, {{"x1", 0.0}, {"x2", 0.0}}, cfg).kind == VerdictKind::In);
  CHECK(membership(kept, {{"x1", -1.0}, {"x2", 0.0}}, cfg).kind == VerdictKind::Out);
}

TEST_CASE("elaborating an unknown name fails cleanly") {
  SetModel m = parse_model(kDiskModel);
  ModelElaborator el(m, EngineConfig{});
  CHECK_THROWS_AS(el.elaborate("nothing"), Error);
  CHECK_THROWS_AS(el.closure("nothing"), Error);
}
