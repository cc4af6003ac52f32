#include "sdr/model.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace sdr {

namespace {

using nlohmann::json;

[[noreturn]] void syntax(const std::string& what) {
  fail(ErrorCode::SyntaxError, what);
}

std::pair<int, int> line_col(const std::string& text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::vector<std::vector<double>> parse_matrix(const json& j,
                                              const std::string& where) {
  if (!j.is_array()) syntax(where + ": matrix must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) syntax(where + ": matrix row must be an array");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) syntax(where + ": matrix entry must be a number");
      r.push_back(v.get<double>());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

SymmetricMatrix to_symmetric(const std::vector<std::vector<double>>& rows,
                             int dim, const std::string& where,
                             std::vector<std::string>* warnings) {
  if (static_cast<int>(rows.size()) != dim)
    fail(ErrorCode::DimensionMismatch,
         where + ": expected " + std::to_string(dim) + " rows");
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != dim)
      fail(ErrorCode::DimensionMismatch,
           where + ": expected " + std::to_string(dim) + " columns");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  double skew = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      skew = std::max(skew, std::abs(flat[static_cast<size_t>(i) * dim + j] -
                                     flat[static_cast<size_t>(j) * dim + i]));
  if (skew > 0.0 && warnings != nullptr)
    warnings->push_back(where + ": matrix is not symmetric (max skew " +
                        std::to_string(skew) + "), symmetrized by averaging");
  return SymmetricMatrix(dim, flat);
}

std::string require_string(const json& j, const std::string& where) {
  if (!j.is_string()) syntax(where + ": expected a string");
  return j.get<std::string>();
}

AffineFunctional parse_model_affine(const std::string& text,
                                    const std::vector<std::string>& vars,
                                    const std::string& where) {
  AffineFunctional f = parse_affine(text);
  for (const auto& v : f.vars)
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      fail(ErrorCode::VariableMismatch,
           where + ": unknown variable " + v + " in \"" + text + "\"");
  return f;
}

SetNode parse_node(const std::string& name, const json& j,
                   const std::vector<std::string>& vars,
                   std::vector<std::string>* warnings) {
  if (!j.is_object() || j.size() != 1)
    syntax("definition " + name + " must be an object with one construction");
  const std::string key = j.begin().key();
  const json& body = j.begin().value();
  SetNode node;

  if (key == "lmi") {
    node.kind = NodeKind::Lmi;
    if (!body.is_object() || !body.contains("dim") || !body.contains("A0") ||
        !body.contains("coeffs"))
      syntax(name + ": lmi needs dim, A0 and coeffs");
    if (!body["dim"].is_number_integer() || body["dim"].get<int>() < 1)
      syntax(name + ": lmi dim must be a positive integer");
    const int dim = body["dim"].get<int>();
    LinearMatrixPolynomial lmp;
    lmp.dim = dim;
    lmp.a0 = to_symmetric(parse_matrix(body["A0"], name + ".A0"), dim,
                          name + ".A0", warnings);
    if (!body["coeffs"].is_object())
      syntax(name + ": coeffs must map variables to matrices");
    for (const auto& [var, mat] : body["coeffs"].items()) {
      if (std::find(vars.begin(), vars.end(), var) == vars.end())
        fail(ErrorCode::VariableMismatch,
             name + ": coefficient for unknown variable " + var);
      lmp.vars.push_back(var);
      lmp.coeffs.push_back(to_symmetric(parse_matrix(mat, name + "." + var),
                                        dim, name + "." + var, warnings));
    }
    node.lmi = validated(std::move(lmp));
  } else if (key == "poly") {
    node.kind = NodeKind::Poly;
    if (!body.is_array() || body.empty())
      syntax(name + ": poly needs a non-empty list of inequalities");
    for (const auto& expr : body)
      node.poly.push_back(parse_model_affine(
          require_string(expr, name + ".poly"), vars, name));
  } else if (key == "relint") {
    node.kind = NodeKind::Relint;
    node.refs = {require_string(body, name + ".relint")};
  } else if (key == "exposed_face" || key == "remove_face") {
    node.kind =
        key == "exposed_face" ? NodeKind::ExposedFace : NodeKind::RemoveFace;
    if (!body.is_object() || !body.contains("s") || !body.contains("l"))
      syntax(name + ": " + key + " needs s and l");
    node.refs = {require_string(body["s"], name + ".s")};
    node.l = parse_model_affine(require_string(body["l"], name + ".l"), vars,
                                name);
  } else if (key == "ker_subset") {
    node.kind = NodeKind::KerSubset;
    if (!body.is_object() || !body.contains("s") || !body.contains("w"))
      syntax(name + ": ker_subset needs s and w");
    node.refs = {require_string(body["s"], name + ".s")};
    node.w_columns = parse_matrix(body["w"], name + ".w");
    for (size_t c = 1; c < node.w_columns.size(); ++c)
      if (node.w_columns[c].size() != node.w_columns[0].size())
        fail(ErrorCode::DimensionMismatch,
             name + ".w: columns have unequal lengths");
  } else if (key == "looparrow") {
    node.kind = NodeKind::Looparrow;
    if (!body.is_object() || !body.contains("t") || !body.contains("s"))
      syntax(name + ": looparrow needs t and s");
    node.refs = {require_string(body["t"], name + ".t"),
                 require_string(body["s"], name + ".s")};
  } else if (key == "intersect") {
    node.kind = NodeKind::Intersect;
    if (!body.is_array() || body.empty())
      syntax(name + ": intersect needs a non-empty list of names");
    for (const auto& ref : body)
      node.refs.push_back(require_string(ref, name + ".intersect"));
  } else if (key == "conv_union") {
    node.kind = NodeKind::ConvUnion;
    if (!body.is_array() || body.size() != 2)
      syntax(name + ": conv_union needs exactly two names");
    node.refs = {require_string(body[0], name + ".conv_union"),
                 require_string(body[1], name + ".conv_union")};
  } else if (key == "project") {
    node.kind = NodeKind::Project;
    if (!body.is_object() || !body.contains("s") || !body.contains("keep"))
      syntax(name + ": project needs s and keep");
    node.refs = {require_string(body["s"], name + ".s")};
    if (!body["keep"].is_array() || body["keep"].empty())
      syntax(name + ": keep must be a non-empty list of variables");
    for (const auto& v : body["keep"]) {
      const std::string var = require_string(v, name + ".keep");
      if (std::find(vars.begin(), vars.end(), var) == vars.end())
        fail(ErrorCode::VariableMismatch,
             name + ": cannot keep unknown variable " + var);
      node.keep.push_back(var);
    }
  } else {
    syntax(name + ": unknown construction \"" + key + "\"");
  }
  return node;
}

void check_acyclic(const SetModel& m) {
  // 0 = unvisited, 1 = on stack, 2 = done
  std::map<std::string, int> state;
  struct Walker {
    const SetModel& m;
    std::map<std::string, int>& state;
    void visit(const std::string& name) {
      const int s = state[name];
      if (s == 1) fail(ErrorCode::CycleError, "definition cycle through " + name);
      if (s == 2) return;
      state[name] = 1;
      for (const auto& ref : m.definitions.at(name).refs) visit(ref);
      state[name] = 2;
    }
  } walker{m, state};
  for (const auto& [name, node] : m.definitions) {
    (void)node;
    walker.visit(name);
  }
}

json matrix_to_json(const SymmetricMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json node_to_json(const SetNode& node) {
  json j;
  switch (node.kind) {
    case NodeKind::Lmi: {
      json coeffs = json::object();
      for (size_t i = 0; i < node.lmi.vars.size(); ++i)
        coeffs[node.lmi.vars[i]] = matrix_to_json(node.lmi.coeffs[i]);
      j["lmi"] = {{"dim", node.lmi.dim},
                  {"A0", matrix_to_json(node.lmi.a0)},
                  {"coeffs", std::move(coeffs)}};
      break;
    }
    case NodeKind::Poly: {
      json exprs = json::array();
      for (const auto& f : node.poly) exprs.push_back(f.to_string());
      j["poly"] = std::move(exprs);
      break;
    }
    case NodeKind::Relint:
      j["relint"] = node.refs[0];
      break;
    case NodeKind::ExposedFace:
      j["exposed_face"] = {{"s", node.refs[0]}, {"l", node.l.to_string()}};
      break;
    case NodeKind::RemoveFace:
      j["remove_face"] = {{"s", node.refs[0]}, {"l", node.l.to_string()}};
      break;
    case NodeKind::KerSubset:
      j["ker_subset"] = {{"s", node.refs[0]}, {"w", node.w_columns}};
      break;
    case NodeKind::Looparrow:
      j["looparrow"] = {{"t", node.refs[0]}, {"s", node.refs[1]}};
      break;
    case NodeKind::Intersect:
      j["intersect"] = node.refs;
      break;
    case NodeKind::ConvUnion:
      j["conv_union"] = node.refs;
      break;
    case NodeKind::Project:
      j["project"] = {{"s", node.refs[0]}, {"keep", node.keep}};
      break;
  }
  return j;
}

bool affine_equal(const AffineFunctional& a, const AffineFunctional& b) {
  return a.vars == b.vars && a.gradient == b.gradient &&
         a.constant == b.constant;
}

bool lmp_equal(const LinearMatrixPolynomial& a,
               const LinearMatrixPolynomial& b) {
  if (a.dim != b.dim || a.vars != b.vars) return false;
  if (a.a0.data() != b.a0.data()) return false;
  for (size_t i = 0; i < a.coeffs.size(); ++i)
    if (a.coeffs[i].data() != b.coeffs[i].data()) return false;
  return true;
}

}  // namespace

SetModel parse_model(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    fail(ErrorCode::SyntaxError, "line " + std::to_string(line) + ", column " +
                                     std::to_string(col) + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("vars") || !root.contains("sets"))
    syntax("model must be an object with \"vars\" and \"sets\"");
  if (!root["vars"].is_array() || root["vars"].empty())
    syntax("\"vars\" must be a non-empty array of variable names");

  SetModel m;
  for (const auto& v : root["vars"]) {
    const std::string name = require_string(v, "vars");
    if (name.empty()) syntax("variable names must be non-empty");
    if (is_reserved_name(name))
      fail(ErrorCode::InvalidInput,
           "variable name " + name + " uses the reserved _aux prefix");
    if (std::find(m.vars.begin(), m.vars.end(), name) != m.vars.end())
      syntax("duplicate variable " + name);
    m.vars.push_back(name);
  }

  if (!root["sets"].is_object())
    syntax("\"sets\" must map names to definitions");
  for (const auto& [name, body] : root["sets"].items()) {
    if (name.empty()) syntax("definition names must be non-empty");
    m.definitions[name] = parse_node(name, body, m.vars, &m.warnings);
  }

  for (const auto& [name, node] : m.definitions)
    for (const auto& ref : node.refs)
      if (m.definitions.find(ref) == m.definitions.end())
        fail(ErrorCode::UndefinedReference,
             name + " references undefined set \"" + ref + "\"");
  check_acyclic(m);
  return m;
}

std::string serialize_model(const SetModel& m) {
  json root;
  root["vars"] = m.vars;
  json sets = json::object();
  for (const auto& [name, node] : m.definitions) sets[name] = node_to_json(node);
  root["sets"] = std::move(sets);
  return root.dump(2) + "\n";
}

bool model_equal(const SetModel& a, const SetModel& b) {
  if (a.vars != b.vars) return false;
  if (a.definitions.size() != b.definitions.size()) return false;
  for (const auto& [name, na] : a.definitions) {
    auto it = b.definitions.find(name);
    if (it == b.definitions.end()) return false;
    const SetNode& nb = it->second;
    if (na.kind != nb.kind || na.refs != nb.refs || na.keep != nb.keep ||
        na.w_columns != nb.w_columns)
      return false;
    if (!affine_equal(na.l, nb.l)) return false;
    if (na.poly.size() != nb.poly.size()) return false;
    for (size_t i = 0; i < na.poly.size(); ++i)
      if (!affine_equal(na.poly[i], nb.poly[i])) return false;
    if (na.kind == NodeKind::Lmi && !lmp_equal(na.lmi, nb.lmi)) return false;
  }
  return true;
}

ModelElaborator::ModelElaborator(const SetModel& model, EngineConfig cfg)
    : model_(model), cfg_(validated(cfg)) {}

std::vector<std::string> ModelElaborator::dependencies(
    const std::string& name) const {
  auto it = model_.definitions.find(name);
  if (it == model_.definitions.end())
    fail(ErrorCode::UndefinedReference, "no set named \"" + name + "\"");
  return it->second.refs;
}

std::vector<std::string> ModelElaborator::closure(
    const std::string& name) const {
  std::vector<std::string> order;
  std::set<std::string> seen;
  struct Walker {
    const ModelElaborator& self;
    std::vector<std::string>& order;
    std::set<std::string>& seen;
    void visit(const std::string& n) {
      if (!seen.insert(n).second) return;
      for (const auto& ref : self.dependencies(n)) visit(ref);
      order.push_back(n);
    }
  } walker{*this, order, seen};
  walker.visit(name);
  return order;
}

const SemidefRepresentation& ModelElaborator::elaborate(
    const std::string& name) {
  auto hit = cache_.find(name);
  if (hit != cache_.end()) return hit->second;
  auto it = model_.definitions.find(name);
  if (it == model_.definitions.end())
    fail(ErrorCode::UndefinedReference, "no set named \"" + name + "\"");
  const SetNode& node = it->second;

  SemidefRepresentation out;
  switch (node.kind) {
    case NodeKind::Lmi:
      out = spectrahedron(embed_vars(node.lmi, model_.vars),
                          "lmi leaf (dim " + std::to_string(node.lmi.dim) + ")");
      break;
    case NodeKind::Poly: {
      std::vector<LinearMatrixPolynomial> rows;
      for (const auto& f : node.poly) rows.push_back(scalar_block(f));
      out = spectrahedron(
          embed_vars(direct_sum(rows), model_.vars),
          "poly leaf (" + std::to_string(node.poly.size()) + " inequalities)");
      break;
    }
    case NodeKind::Relint:
      out = relative_interior(elaborate(node.refs[0]), names_, cfg_);
      out.provenance = "relint(" + node.refs[0] + ")";
      break;
    case NodeKind::ExposedFace:
      out = exposed_face(elaborate(node.refs[0]), node.l);
      out.provenance =
          "exposed_face(" + node.refs[0] + ", l: " + node.l.to_string() + ")";
      break;
    case NodeKind::RemoveFace:
      out = remove_exposed_face(elaborate(node.refs[0]), node.l, names_);
      out.provenance =
          "remove_face(" + node.refs[0] + ", l: " + node.l.to_string() + ")";
      break;
    case NodeKind::KerSubset: {
      const SemidefRepresentation& s = elaborate(node.refs[0]);
      const int k = s.pencil.dim;
      const int r = static_cast<int>(node.w_columns.size());
      for (const auto& col : node.w_columns)
        if (static_cast<int>(col.size()) != k)
          fail(ErrorCode::DimensionMismatch,
               name + ".w: column length must equal pencil dimension " +
                   std::to_string(k));
      Matrix cols(k, r);
      for (int c = 0; c < r; ++c)
        for (int i = 0; i < k; ++i)
          cols.at(i, c) = node.w_columns[static_cast<size_t>(c)][static_cast<size_t>(i)];
      const Subspace w = r == 0 ? Subspace::zero(k)
                                : Subspace::from_spanning(k, cols);
      out = kernel_containment(s, w, names_);
      out.provenance = "ker_subset(" + node.refs[0] + ", rank " +
                       std::to_string(w.rank()) + ")";
      break;
    }
    case NodeKind::Looparrow:
      out = looparrow(elaborate(node.refs[0]), elaborate(node.refs[1]), names_);
      out.provenance =
          "looparrow(t: " + node.refs[0] + ", s: " + node.refs[1] + ")";
      break;
    case NodeKind::Intersect: {
      std::vector<SemidefRepresentation> parts;
      for (const auto& ref : node.refs) parts.push_back(elaborate(ref));
      out = intersect(parts, names_);
      std::string names_list;
      for (const auto& ref : node.refs) {
        if (!names_list.empty()) names_list += ", ";
        names_list += ref;
      }
      out.provenance = "intersect(" + names_list + ")";
      break;
    }
    case NodeKind::ConvUnion:
      out = conv_union(elaborate(node.refs[0]), elaborate(node.refs[1]),
                       names_);
      out.provenance =
          "conv_union(" + node.refs[0] + ", " + node.refs[1] + ")";
      break;
    case NodeKind::Project: {
      out = project(elaborate(node.refs[0]), node.keep);
      std::string keep_list;
      for (const auto& v : node.keep) {
        if (!keep_list.empty()) keep_list += ", ";
        keep_list += v;
      }
      out.provenance = "project(" + node.refs[0] + ", keep: " + keep_list + ")";
      break;
    }
  }
  return cache_.emplace(name, std::move(out)).first->second;
}

}  // namespace sdr
