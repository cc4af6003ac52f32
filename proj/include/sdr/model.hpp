#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sdr/constructions.hpp"

namespace sdr {

enum class NodeKind {
  Lmi,
  Poly,
  Relint,
  ExposedFace,
  RemoveFace,
  KerSubset,
  Looparrow,
  Intersect,
  ConvUnion,
  Project,
};

/// One named definition in a set model. Only the fields relevant to `kind`
/// are populated.
struct SetNode {
  NodeKind kind = NodeKind::Lmi;
  LinearMatrixPolynomial lmi;            // Lmi
  std::vector<AffineFunctional> poly;    // Poly
  std::vector<std::string> refs;         // referenced definition names
  AffineFunctional l;                    // ExposedFace / RemoveFace
  std::vector<std::vector<double>> w_columns;  // KerSubset basis columns
  std::vector<std::string> keep;         // Project
};

/// Declarative model: a global visible variable list plus a named DAG of
/// set definitions.
struct SetModel {
  std::vector<std::string> vars;
  std::map<std::string, SetNode> definitions;
  std::vector<std::string> warnings;  // non-fatal parse notes
};

/// Parses and validates the JSON model format. Syntax errors carry
/// line/column; undefined references, cycles, and matrix shape problems
/// get their own error codes.
SetModel parse_model(const std::string& text);

/// Canonical JSON text; parse(serialize(m)) is structurally identical to m.
std::string serialize_model(const SetModel& m);

/// Structural equality (used by the round-trip property).
bool model_equal(const SetModel& a, const SetModel& b);

/// Lazy, memoized elaboration of model definitions into SDRs. One fresh-name
/// counter per elaborator keeps auxiliary names reproducible.
class ModelElaborator {
 public:
  ModelElaborator(const SetModel& model, EngineConfig cfg);

  const SemidefRepresentation& elaborate(const std::string& name);
  /// Direct dependencies of a definition.
  std::vector<std::string> dependencies(const std::string& name) const;
  /// name plus all transitive dependencies, dependencies first.
  std::vector<std::string> closure(const std::string& name) const;
  const SetModel& model() const { return model_; }

 private:
  SetModel model_;
  EngineConfig cfg_;
  FreshNames names_;
  std::map<std::string, SemidefRepresentation> cache_;
};

}  // namespace sdr
