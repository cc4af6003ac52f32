#include "sdr/oracle.hpp"

#include <cmath>
#include <random>

namespace sdr {

bool albert_criterion(const SymmetricMatrix& a, const Matrix& b, double tol) {
  if (b.cols() != a.dim())
    fail(ErrorCode::InvalidInput, "B columns must match A dimension");
  if (min_eigenvalue(a) < -tol) return false;
  // range projector A_pinv * A; residual of B against it
  const Matrix proj = pseudoinverse(a).to_matrix() * a.to_matrix();
  const Matrix residual = b - b * proj;
  return residual.frobenius_norm() <= 1e-7 * (1.0 + b.frobenius_norm());
}

namespace {

Assignment pushed_point(const Assignment& x, const Assignment& ref,
                        double eps) {
  Assignment out;
  for (const auto& [name, value] : x) {
    auto it = ref.find(name);
    if (it == ref.end())
      fail(ErrorCode::VariableMismatch, "points disagree on variable " + name);
    out[name] = value + eps * (value - it->second);
  }
  return out;
}

}  // namespace

bool relint_member(const MembershipFn& s_member, const Assignment& z,
                   const Assignment& x, const std::vector<double>& eps_grid) {
  if (!s_member(x)) return false;
  for (double eps : eps_grid)
    if (s_member(pushed_point(x, z, eps))) return true;
  return false;
}

Subspace face_of_point(const LinearMatrixPolynomial& lmp, const Assignment& x,
                       double feas_tol) {
  const SymmetricMatrix ax = evaluate(lmp, x);
  if (min_eigenvalue(ax) < -feas_tol)
    fail(ErrorCode::InvalidInput, "point is not in the spectrahedron");
  return kernel_basis(ax, std::max(default_rank_tol(ax), 10.0 * feas_tol));
}

bool face_eps_characterization(const MembershipFn& s_member,
                               const Assignment& x, const Assignment& y,
                               const std::vector<double>& eps_grid) {
  for (double eps : eps_grid)
    if (s_member(pushed_point(x, y, eps))) return true;
  return false;
}

bool looparrow_member(const std::vector<Assignment>& t_sample,
                      const LinearMatrixPolynomial& lmp, const Assignment& x,
                      double feas_tol) {
  const SymmetricMatrix ax = evaluate(lmp, x);
  if (min_eigenvalue(ax) < -feas_tol) return false;
  const Subspace kx =
      kernel_basis(ax, std::max(default_rank_tol(ax), 10.0 * feas_tol));
  for (const auto& z : t_sample) {
    const SymmetricMatrix az = evaluate(lmp, z);
    const Subspace kz =
        kernel_basis(az, std::max(default_rank_tol(az), 10.0 * feas_tol));
    if (subspace_contained(kx, kz)) return true;
  }
  return false;
}

std::vector<Assignment> rejection_sample(
    const MembershipFn& member, const std::vector<std::string>& vars,
    const std::vector<std::pair<double, double>>& box, int count,
    std::uint64_t seed) {
  if (box.size() != vars.size())
    fail(ErrorCode::InvalidInput, "one box interval per variable");
  std::vector<Assignment> out;
  if (count < 1) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const long max_attempts = 200L * count;
  for (long attempt = 0;
       attempt < max_attempts && static_cast<int>(out.size()) < count;
       ++attempt) {
    Assignment p;
    for (size_t i = 0; i < vars.size(); ++i) {
      const auto& [lo, hi] = box[i];
      p[vars[i]] = lo + (hi - lo) * u(rng);
    }
    if (member(p)) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace sdr
