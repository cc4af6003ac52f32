#pragma once

#include <cstdint>

#include "sdr/pencil.hpp"

namespace sdr {

enum class VerdictKind { In, Out, Unknown };

const char* verdict_name(VerdictKind kind);

/// Feasibility/membership answer. In comes with a witness assignment of the
/// free variables and the min eigenvalue there (margin >= -tol_feas);
/// Out/Unknown carry the final infeasibility residual.
struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  Assignment witness;
  double margin = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Engine knobs. Every free variable is boxed to |v| <= lambda_max, which
/// turns the open conditions "exists lambda" into decidable ones with
/// resolution limit 1/lambda_max.
struct EngineConfig {
  double lambda_max = 1e6;
  double tol_feas = 1e-7;
  double out_threshold = 2e-7;
  int max_iter = 5000;  // total Newton step budget
  int restarts = 5;     // kept for CLI stability; the solver is deterministic
  std::uint64_t seed = 0;
};

/// Enforces lambda_max > 0, 0 < tol_feas < out_threshold, positive counts.
EngineConfig validated(EngineConfig cfg);

/// Decides "exists y in box: L(y) >= 0" by an interior-point method on the
/// slack program max t s.t. L(y) - t*I >= 0 over the box. In when the best
/// value reaches -tol_feas (checked by eigenvalues at the witness); Out when
/// the certified optimum is below -out_threshold, which lower-bounds the
/// cone distance of every boxed pencil value; Unknown otherwise.
Verdict find_psd_point(const LinearMatrixPolynomial& pencil,
                       const EngineConfig& cfg);

/// Membership of x in the set denoted by S: substitutes the visible
/// variables and decides feasibility over the auxiliaries.
Verdict membership(const SemidefRepresentation& s, const Assignment& x,
                   const EngineConfig& cfg);

/// Up to `count` feasible points of the pencil: the solver witness plus
/// seeded random-direction walks from it (lambda_min is concave along rays,
/// so bisected endpoints stay feasible). Empty when no point is found.
std::vector<Assignment> sample_feasible_points(
    const LinearMatrixPolynomial& pencil, const EngineConfig& cfg, int count);

/// A point in the relative interior of the lifted spectrahedron of S:
/// maximizes t with pencil(y) - t*P >= 0 by bisection (P = identity first;
/// if the best t is ~0 the set is flat, and a second pass replaces P by the
/// projector onto the complement of the common kernel of sampled feasible
/// values). Throws EmptySet when no feasible point is found at all.
Assignment interior_point(const SemidefRepresentation& s,
                          const EngineConfig& cfg);

}  // namespace sdr
