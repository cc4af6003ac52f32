#pragma once

#include <map>
#include <string>
#include <vector>

#include "sdr/matrix.hpp"

namespace sdr {

/// Point in variable space, keyed by variable name.
using Assignment = std::map<std::string, double>;

/// Affine functional c + sum_i g_i * v_i over named variables.
struct AffineFunctional {
  std::vector<std::string> vars;
  std::vector<double> gradient;  // aligned with vars
  double constant = 0.0;

  static AffineFunctional constant_value(double c);
  static AffineFunctional variable(const std::string& name);

  double evaluate(const Assignment& point) const;
  AffineFunctional negated() const;
  std::string to_string() const;
};

/// Parses the affine grammar: signed decimal coefficients, variable names,
/// +, -, * (e.g. "1 - x1", "0.5*x1 + x2 - 2").
AffineFunctional parse_affine(const std::string& text);

/// Shortest decimal representation that scans back to exactly the same
/// double.
std::string format_double(double v);

/// A(X) = A0 + sum_i X_i * A_i with symmetric coefficients. `blocks` records
/// the diagonal block sizes of every coefficient simultaneously (sum = dim);
/// the feasibility engine projects onto the PSD cone block by block.
struct LinearMatrixPolynomial {
  int dim = 0;
  std::vector<std::string> vars;
  SymmetricMatrix a0{1};
  std::vector<SymmetricMatrix> coeffs;
  std::vector<int> blocks;

  const SymmetricMatrix& coeff_of(const std::string& var) const;
  bool has_var(const std::string& var) const;
};

/// Checks dim/vars/blocks consistency; fills blocks = {dim} when empty.
LinearMatrixPolynomial validated(LinearMatrixPolynomial lmp);

/// Pencil over visible ++ auxiliary variables; denotes the projection
/// { x | exists y : pencil(x, y) >= 0 } onto the visible coordinates.
struct SemidefRepresentation {
  LinearMatrixPolynomial pencil;
  std::vector<std::string> visible;
  std::vector<std::string> auxiliary;
  std::string provenance;
  // Number of relative_interior applications in this SDR's history. Each one
  // could merge its two gadget lambdas into one, so the merged auxiliary
  // count reported alongside the literal one is |auxiliary| - relint_count.
  int relint_count = 0;
};

/// Spectrahedron: SDR with no auxiliaries.
SemidefRepresentation spectrahedron(LinearMatrixPolynomial pencil,
                                    std::string provenance = "pencil");

/// Deterministic fresh-name source, threaded explicitly through
/// constructions. Generated names use the reserved "_aux" prefix.
struct FreshNames {
  int counter = 0;
  std::string next() { return "_aux" + std::to_string(counter++); }
};

bool is_reserved_name(const std::string& name);

/// Exact linear combination A0 + sum x_i A_i. The assignment must supply
/// every variable and nothing else.
SymmetricMatrix evaluate(const LinearMatrixPolynomial& lmp,
                         const Assignment& point);

/// Substitutes a subset of the variables, returning a pencil over the rest:
/// A0' = A0 + sum_{assigned} x_i A_i. Keys must all be variables of lmp.
LinearMatrixPolynomial partial_evaluate(const LinearMatrixPolynomial& lmp,
                                        const Assignment& point);

/// Replaces one variable by an affine expression of (possibly new) variables.
LinearMatrixPolynomial substitute_var(const LinearMatrixPolynomial& lmp,
                                      const std::string& var,
                                      const AffineFunctional& expr);

/// Block-diagonal sum; variables unified by name in order of first
/// appearance. S(direct_sum) = intersection of the S(L_i).
LinearMatrixPolynomial direct_sum(
    const std::vector<LinearMatrixPolynomial>& parts);

/// 1x1 pencil whose value at x is l(x).
LinearMatrixPolynomial scalar_block(const AffineFunctional& l);

/// [[lambda, 1], [1, l(x)]]: exists lambda with block >= 0 iff l(x) > 0.
LinearMatrixPolynomial strict_pos_block(const AffineFunctional& l,
                                        const std::string& lambda_name);

/// Perspective transform t*A0 + sum X_i A_i.
LinearMatrixPolynomial homogenize(const LinearMatrixPolynomial& lmp,
                                  const std::string& t_name);

/// Renames variables through an injective mapping; unmapped names persist.
LinearMatrixPolynomial rename_vars(
    const LinearMatrixPolynomial& lmp,
    const std::map<std::string, std::string>& mapping);

/// Extends the variable list to a superset; new variables get zero
/// coefficients.
LinearMatrixPolynomial embed_vars(const LinearMatrixPolynomial& lmp,
                                  const std::vector<std::string>& superset);

}  // namespace sdr
