#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "sdr/pencil.hpp"

namespace sdr {

/// Ground-truth membership predicate (analytic geometry or any other
/// implementation under test).
using MembershipFn = std::function<bool(const Assignment&)>;

inline const std::vector<double> kDefaultEpsGrid = {1e-1, 1e-2, 1e-3};

/// Exists lambda with [[A, B^t], [B, lambda I]] >= 0, decided directly:
/// A >= 0 (min eigenvalue >= -tol) and B = B A_pinv A within
/// 1e-7 * (1 + ||B||_F).
bool albert_criterion(const SymmetricMatrix& a, const Matrix& b,
                      double tol = 1e-7);

/// x in relint(S), given a trusted relint point z: x in S and some
/// eps in the grid keeps the pushed point x + eps*(x - z) inside S.
bool relint_member(const MembershipFn& s_member, const Assignment& z,
                   const Assignment& x,
                   const std::vector<double>& eps_grid = kDefaultEpsGrid);

/// The face of the spectrahedron S(L) containing x in its relative
/// interior, as its kernel parameter: F_x = F_U with U = ker A(x).
Subspace face_of_point(const LinearMatrixPolynomial& lmp, const Assignment& x,
                       double feas_tol = 1e-7);

/// y in F_x, by the segment characterization: some eps in the grid keeps
/// x + eps*(x - y) inside S. Both points must lie in S.
bool face_eps_characterization(const MembershipFn& s_member,
                               const Assignment& x, const Assignment& y,
                               const std::vector<double>& eps_grid = kDefaultEpsGrid);

/// x in (T loop-arrow S) for a spectrahedron S(L), from a finite sample of
/// T: A(x) >= 0 and some sampled z has ker A(x) inside ker A(z).
bool looparrow_member(const std::vector<Assignment>& t_sample,
                      const LinearMatrixPolynomial& lmp, const Assignment& x,
                      double feas_tol = 1e-7);

/// Seeded rejection sampling of a membership predicate inside a box
/// (per-variable [lo, hi]); returns up to `count` points.
std::vector<Assignment> rejection_sample(
    const MembershipFn& member, const std::vector<std::string>& vars,
    const std::vector<std::pair<double, double>>& box, int count,
    std::uint64_t seed);

}  // namespace sdr
