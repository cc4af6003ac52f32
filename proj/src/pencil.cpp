#include "sdr/pencil.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace sdr {

/// Shortest decimal that scans back to exactly the same double.
std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

int index_of(const std::vector<std::string>& vars, const std::string& name) {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == name) return static_cast<int>(i);
  return -1;
}

}  // namespace

AffineFunctional AffineFunctional::constant_value(double c) {
  AffineFunctional f;
  f.constant = c;
  return f;
}

AffineFunctional AffineFunctional::variable(const std::string& name) {
  AffineFunctional f;
  f.vars.push_back(name);
  f.gradient.push_back(1.0);
  return f;
}

double AffineFunctional::evaluate(const Assignment& point) const {
  double value = constant;
  for (size_t i = 0; i < vars.size(); ++i) {
    auto it = point.find(vars[i]);
    if (it == point.end())
      fail(ErrorCode::VariableMismatch, "missing variable " + vars[i]);
    value += gradient[i] * it->second;
  }
  return value;
}

AffineFunctional AffineFunctional::negated() const {
  AffineFunctional f = *this;
  f.constant = -f.constant;
  for (double& g : f.gradient) g = -g;
  return f;
}

std::string AffineFunctional::to_string() const {
  std::string out;
  auto append_term = [&](double coeff, const std::string& var) {
    if (coeff == 0.0) return;
    const bool negative = coeff < 0.0;
    const double mag = std::abs(coeff);
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    if (var.empty()) {
      out += format_double(mag);
    } else if (mag == 1.0) {
      out += var;
    } else {
      out += format_double(mag) + "*" + var;
    }
  };
  append_term(constant, "");
  for (size_t i = 0; i < vars.size(); ++i) append_term(gradient[i], vars[i]);
  if (out.empty()) out = "0";
  return out;
}

namespace {

struct AffineLexer {
  const std::string& text;
  size_t pos = 0;

  explicit AffineLexer(const std::string& t) : text(t) {}

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool done() {
    skip_space();
    return pos >= text.size();
  }
  char peek() {
    skip_space();
    return pos < text.size() ? text[pos] : '\0';
  }
  [[noreturn]] void error(const std::string& what) {
    fail(ErrorCode::SyntaxError,
         what + " at offset " + std::to_string(pos) + " in \"" + text + "\"");
  }
  double number() {
    skip_space();
    const char* start = text.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) error("expected number");
    pos += static_cast<size_t>(end - start);
    return v;
  }
  std::string identifier() {
    skip_space();
    size_t start = pos;
    if (pos < text.size() &&
        (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) error("expected identifier");
    return text.substr(start, pos - start);
  }
};

}  // namespace

AffineFunctional parse_affine(const std::string& text) {
  AffineLexer lex(text);
  AffineFunctional f;
  auto add = [&](double coeff, const std::string& var) {
    if (var.empty()) {
      f.constant += coeff;
      return;
    }
    int idx = index_of(f.vars, var);
    if (idx < 0) {
      f.vars.push_back(var);
      f.gradient.push_back(coeff);
    } else {
      f.gradient[static_cast<size_t>(idx)] += coeff;
    }
  };

  bool first = true;
  while (!lex.done()) {
    double sign = 1.0;
    char c = lex.peek();
    if (c == '+' || c == '-') {
      sign = (c == '-') ? -1.0 : 1.0;
      ++lex.pos;
    } else if (!first) {
      lex.error("expected + or -");
    }
    // term: product of numbers and at most one variable
    double coeff = sign;
    std::string var;
    bool have_factor = false;
    for (;;) {
      c = lex.peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        coeff *= lex.number();
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        if (!var.empty()) lex.error("nonlinear term");
        var = lex.identifier();
      } else {
        lex.error("expected number or variable");
      }
      have_factor = true;
      if (lex.peek() == '*') {
        ++lex.pos;
        continue;
      }
      break;
    }
    if (!have_factor) lex.error("empty term");
    add(coeff, var);
    first = false;
  }
  if (first) lex.error("empty expression");

  // Drop variables whose net coefficient vanished, so serialization
  // round-trips exactly.
  AffineFunctional out;
  out.constant = f.constant;
  for (size_t i = 0; i < f.vars.size(); ++i) {
    if (f.gradient[i] == 0.0) continue;
    out.vars.push_back(f.vars[i]);
    out.gradient.push_back(f.gradient[i]);
  }
  return out;
}

const SymmetricMatrix& LinearMatrixPolynomial::coeff_of(
    const std::string& var) const {
  int idx = index_of(vars, var);
  if (idx < 0) fail(ErrorCode::VariableMismatch, "no variable " + var);
  return coeffs[static_cast<size_t>(idx)];
}

bool LinearMatrixPolynomial::has_var(const std::string& var) const {
  return index_of(vars, var) >= 0;
}

LinearMatrixPolynomial validated(LinearMatrixPolynomial lmp) {
  if (lmp.dim < 1) fail(ErrorCode::InvalidInput, "pencil dim must be >= 1");
  if (lmp.a0.dim() != lmp.dim)
    fail(ErrorCode::DimensionMismatch, "A0 dim != pencil dim");
  if (lmp.coeffs.size() != lmp.vars.size())
    fail(ErrorCode::InvalidInput, "one coefficient matrix per variable");
  for (const auto& c : lmp.coeffs)
    if (c.dim() != lmp.dim)
      fail(ErrorCode::DimensionMismatch, "coefficient dim != pencil dim");
  std::set<std::string> seen(lmp.vars.begin(), lmp.vars.end());
  if (seen.size() != lmp.vars.size())
    fail(ErrorCode::InvalidInput, "duplicate variable names");
  if (lmp.blocks.empty()) lmp.blocks = {lmp.dim};
  int total = 0;
  for (int b : lmp.blocks) {
    if (b < 1) fail(ErrorCode::InvalidInput, "block sizes must be >= 1");
    total += b;
  }
  if (total != lmp.dim)
    fail(ErrorCode::InvalidInput, "block sizes must sum to pencil dim");
  return lmp;
}

SemidefRepresentation spectrahedron(LinearMatrixPolynomial pencil,
                                    std::string provenance) {
  SemidefRepresentation s;
  s.pencil = validated(std::move(pencil));
  s.visible = s.pencil.vars;
  s.provenance = std::move(provenance);
  return s;
}

bool is_reserved_name(const std::string& name) {
  return name.rfind("_aux", 0) == 0;
}

SymmetricMatrix evaluate(const LinearMatrixPolynomial& lmp,
                         const Assignment& point) {
  for (const auto& [name, value] : point) {
    (void)value;
    if (!lmp.has_var(name))
      fail(ErrorCode::VariableMismatch, "extra variable " + name);
  }
  SymmetricMatrix acc = lmp.a0;
  for (size_t i = 0; i < lmp.vars.size(); ++i) {
    auto it = point.find(lmp.vars[i]);
    if (it == point.end())
      fail(ErrorCode::VariableMismatch, "missing variable " + lmp.vars[i]);
    if (it->second != 0.0) acc = acc + lmp.coeffs[i].scaled(it->second);
  }
  return acc;
}

LinearMatrixPolynomial partial_evaluate(const LinearMatrixPolynomial& lmp,
                                        const Assignment& point) {
  for (const auto& [name, value] : point) {
    (void)value;
    if (!lmp.has_var(name))
      fail(ErrorCode::VariableMismatch, "extra variable " + name);
  }
  LinearMatrixPolynomial out;
  out.dim = lmp.dim;
  out.a0 = lmp.a0;
  out.blocks = lmp.blocks;
  for (size_t i = 0; i < lmp.vars.size(); ++i) {
    auto it = point.find(lmp.vars[i]);
    if (it != point.end()) {
      if (it->second != 0.0) out.a0 = out.a0 + lmp.coeffs[i].scaled(it->second);
    } else {
      out.vars.push_back(lmp.vars[i]);
      out.coeffs.push_back(lmp.coeffs[i]);
    }
  }
  return out;
}

LinearMatrixPolynomial substitute_var(const LinearMatrixPolynomial& lmp,
                                      const std::string& var,
                                      const AffineFunctional& expr) {
  int idx = index_of(lmp.vars, var);
  if (idx < 0) fail(ErrorCode::VariableMismatch, "no variable " + var);
  if (index_of(expr.vars, var) >= 0)
    fail(ErrorCode::VariableMismatch, "substitution reuses " + var);
  const SymmetricMatrix& avar = lmp.coeffs[static_cast<size_t>(idx)];

  LinearMatrixPolynomial out;
  out.dim = lmp.dim;
  out.blocks = lmp.blocks;
  out.a0 = lmp.a0;
  if (expr.constant != 0.0) out.a0 = out.a0 + avar.scaled(expr.constant);
  for (size_t i = 0; i < lmp.vars.size(); ++i) {
    if (static_cast<int>(i) == idx) continue;
    out.vars.push_back(lmp.vars[i]);
    out.coeffs.push_back(lmp.coeffs[i]);
  }
  for (size_t i = 0; i < expr.vars.size(); ++i) {
    int j = index_of(out.vars, expr.vars[i]);
    if (j < 0) {
      out.vars.push_back(expr.vars[i]);
      out.coeffs.push_back(avar.scaled(expr.gradient[i]));
    } else {
      out.coeffs[static_cast<size_t>(j)] =
          out.coeffs[static_cast<size_t>(j)] + avar.scaled(expr.gradient[i]);
    }
  }
  return out;
}

LinearMatrixPolynomial direct_sum(
    const std::vector<LinearMatrixPolynomial>& parts) {
  if (parts.empty()) fail(ErrorCode::InvalidInput, "direct_sum of nothing");
  LinearMatrixPolynomial out;
  out.dim = 0;
  for (const auto& p : parts) {
    out.dim += p.dim;
    for (const auto& v : p.vars)
      if (index_of(out.vars, v) < 0) out.vars.push_back(v);
    out.blocks.insert(out.blocks.end(), p.blocks.begin(), p.blocks.end());
  }
  auto assemble = [&](auto&& pick) {
    SymmetricMatrix m(out.dim);
    int offset = 0;
    for (const auto& p : parts) {
      const SymmetricMatrix* block = pick(p);
      if (block != nullptr)
        for (int i = 0; i < p.dim; ++i)
          for (int j = i; j < p.dim; ++j)
            m.set(offset + i, offset + j, block->at(i, j));
      offset += p.dim;
    }
    return m;
  };
  out.a0 = assemble([](const LinearMatrixPolynomial& p) { return &p.a0; });
  for (const auto& v : out.vars)
    out.coeffs.push_back(assemble([&](const LinearMatrixPolynomial& p)
                                      -> const SymmetricMatrix* {
      int idx = index_of(p.vars, v);
      return idx < 0 ? nullptr : &p.coeffs[static_cast<size_t>(idx)];
    }));
  return out;
}

LinearMatrixPolynomial scalar_block(const AffineFunctional& l) {
  LinearMatrixPolynomial out;
  out.dim = 1;
  out.blocks = {1};
  out.a0 = SymmetricMatrix::diagonal({l.constant});
  out.vars = l.vars;
  for (double g : l.gradient)
    out.coeffs.push_back(SymmetricMatrix::diagonal({g}));
  return out;
}

LinearMatrixPolynomial strict_pos_block(const AffineFunctional& l,
                                        const std::string& lambda_name) {
  if (index_of(l.vars, lambda_name) >= 0)
    fail(ErrorCode::VariableMismatch, "gadget variable collides: " + lambda_name);
  LinearMatrixPolynomial out;
  out.dim = 2;
  out.blocks = {2};
  out.a0 = SymmetricMatrix(2, {0.0, 1.0, 1.0, l.constant});
  out.vars = l.vars;
  for (double g : l.gradient)
    out.coeffs.push_back(SymmetricMatrix(2, {0.0, 0.0, 0.0, g}));
  out.vars.push_back(lambda_name);
  out.coeffs.push_back(SymmetricMatrix(2, {1.0, 0.0, 0.0, 0.0}));
  return out;
}

LinearMatrixPolynomial homogenize(const LinearMatrixPolynomial& lmp,
                                  const std::string& t_name) {
  if (lmp.has_var(t_name))
    fail(ErrorCode::VariableMismatch, "homogenization variable collides: " + t_name);
  LinearMatrixPolynomial out = lmp;
  out.vars.push_back(t_name);
  out.coeffs.push_back(lmp.a0);
  out.a0 = SymmetricMatrix(lmp.dim);  // zero
  return out;
}

LinearMatrixPolynomial rename_vars(
    const LinearMatrixPolynomial& lmp,
    const std::map<std::string, std::string>& mapping) {
  LinearMatrixPolynomial out = lmp;
  for (auto& v : out.vars) {
    auto it = mapping.find(v);
    if (it != mapping.end()) v = it->second;
  }
  std::set<std::string> seen(out.vars.begin(), out.vars.end());
  if (seen.size() != out.vars.size())
    fail(ErrorCode::VariableMismatch, "rename mapping not injective");
  return out;
}

LinearMatrixPolynomial embed_vars(const LinearMatrixPolynomial& lmp,
                                  const std::vector<std::string>& superset) {
  std::set<std::string> seen(superset.begin(), superset.end());
  if (seen.size() != superset.size())
    fail(ErrorCode::VariableMismatch, "embedding list has duplicates");
  for (const auto& v : lmp.vars)
    if (seen.find(v) == seen.end())
      fail(ErrorCode::VariableMismatch, "embedding drops variable " + v);
  LinearMatrixPolynomial out;
  out.dim = lmp.dim;
  out.blocks = lmp.blocks;
  out.a0 = lmp.a0;
  out.vars = superset;
  for (const auto& v : superset) {
    int idx = index_of(lmp.vars, v);
    out.coeffs.push_back(idx < 0 ? SymmetricMatrix(lmp.dim)
                                 : lmp.coeffs[static_cast<size_t>(idx)]);
  }
  return out;
}

}  // namespace sdr
