#include "sdr/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sdr {

const char* verdict_name(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::In: return "In";
    case VerdictKind::Out: return "Out";
    case VerdictKind::Unknown: return "Unknown";
  }
  return "?";
}

EngineConfig validated(EngineConfig cfg) {
  if (!(cfg.lambda_max > 0.0))
    fail(ErrorCode::InvalidInput, "lambda_max must be positive");
  if (!(cfg.tol_feas > 0.0))
    fail(ErrorCode::InvalidInput, "tol_feas must be positive");
  if (!(cfg.out_threshold > cfg.tol_feas))
    fail(ErrorCode::InvalidInput, "out_threshold must exceed tol_feas");
  if (cfg.max_iter < 1 || cfg.restarts < 1)
    fail(ErrorCode::InvalidInput, "max_iter and restarts must be >= 1");
  return cfg;
}

namespace {

Assignment to_assignment(const std::vector<std::string>& vars,
                         const std::vector<double>& y) {
  Assignment a;
  for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = y[i];
  return a;
}

/// Jacobi eigendecomposition on raw buffers (no allocation): a is k x k
/// row-major and is reduced to diagonal in place, q receives the
/// eigenvectors (column c pairs with a[c*k+c]).
void jacobi_buffers(int k, double* a, double* q) {
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) q[i * k + j] = (i == j) ? 1.0 : 0.0;
  double norm = 0.0;
  for (int i = 0; i < k * k; ++i) norm += a[i] * a[i];
  const double stop = 1e-13 * (1.0 + std::sqrt(norm));
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) off += 2.0 * a[i * k + j] * a[i * k + j];
    if (std::sqrt(off) < stop) break;
    for (int p = 0; p < k - 1; ++p) {
      for (int r = p + 1; r < k; ++r) {
        const double apr = a[p * k + r];
        if (std::abs(apr) <= 1e-300) continue;
        const double app = a[p * k + p];
        const double arr = a[r * k + r];
        const double theta = (arr - app) / (2.0 * apr);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        a[p * k + p] = app - t * apr;
        a[r * k + r] = arr + t * apr;
        a[p * k + r] = 0.0;
        a[r * k + p] = 0.0;
        for (int m = 0; m < k; ++m) {
          if (m != p && m != r) {
            const double amp = a[m * k + p];
            const double amr = a[m * k + r];
            a[m * k + p] = amp - s * (amr + tau * amp);
            a[m * k + r] = amr + s * (amp - tau * amr);
            a[p * k + m] = a[m * k + p];
            a[r * k + m] = a[m * k + r];
          }
          const double qmp = q[m * k + p];
          const double qmr = q[m * k + r];
          q[m * k + p] = qmp - s * (qmr + tau * qmp);
          q[m * k + r] = qmr + s * (qmp - tau * qmr);
        }
      }
    }
  }
}

/// Damped-Newton log-barrier method for the concave slack program
///
///   maximize t   s.t.   A(y) - t*I >= 0,  |y_i| <= lambda_max,  t <= cap.
///
/// It is always strictly feasible (push t far below lambda_min(A(0))), the
/// cap keeps the optimum a bounded walk away, and the barrier parameter
/// certifies optimality: at a centered iterate, t* <= t_hat + mu*nu. The
/// optimum t* is the best achievable smallest eigenvalue, so its sign
/// (against the tolerance bands) decides feasibility of the pencil.
class Barrier {
 public:
  Barrier(const LinearMatrixPolynomial& lmp, const EngineConfig& cfg)
      : lmp_(lmp),
        cfg_(cfg),
        n_(lmp.dim),
        p_(static_cast<int>(lmp.vars.size())),
        q_(p_ + 1),
        scale_(1.0 + lmp.a0.frobenius_norm()),
        cap_(0.05 * scale_),
        u_(q_, 0.0),
        cand_(q_, 0.0),
        g_(q_, 0.0),
        dir_(q_, 0.0),
        h_(static_cast<size_t>(q_) * q_, 0.0),
        hc_(static_cast<size_t>(q_) * q_, 0.0) {
    for (int b : lmp_.blocks) mb_ = std::max(mb_, b);
    eb_.assign(static_cast<size_t>(mb_) * mb_, 0.0);
    qb_.assign(static_cast<size_t>(mb_) * mb_, 0.0);
    wb_.assign(static_cast<size_t>(mb_) * mb_, 0.0);
    m_.assign(static_cast<size_t>(p_) * mb_ * mb_, 0.0);
    d_.assign(n_, 0.0);
  }

  struct Result {
    std::vector<double> y;
    double t_hat = 0.0;  // achieved slack, strictly feasible
    double gap = 0.0;    // certified: t* <= t_hat + gap
    bool certified = false;
    int newton_steps = 0;
  };

  Result solve() {
    std::fill(u_.begin(), u_.end(), 0.0);
    u_[p_] = start_t();
    const double nu = n_ + 2.0 * p_ + 1.0;
    const double band = std::min(cfg_.tol_feas,
                                 cfg_.out_threshold - cfg_.tol_feas);
    const double mu_final = band / (50.0 * nu);
    int steps = 0;
    double mu = scale_;
    bool centered = false;
    while (true) {
      centered = center(mu, steps);
      if (!centered || mu <= mu_final) break;
      mu = std::max(0.2 * mu, mu_final);
    }
    Result r;
    r.y.assign(u_.begin(), u_.begin() + p_);
    r.t_hat = u_[p_];
    r.gap = 2.0 * mu * nu;
    r.certified = centered && mu <= mu_final;
    r.newton_steps = steps;
    return r;
  }

 private:
  static size_t at(int i, int j, int k) {
    return static_cast<size_t>(i) * k + j;
  }

  double start_t() const {
    // strictly below both lambda_min(A(0)) and the cap
    SymmetricMatrix a0 = lmp_.a0;
    return std::min(min_eigenvalue(a0), cap_) - 0.1 * scale_ - 1.0;
  }

  /// Blockwise eigendecomposition of S = A(y) - t*I at `u`; returns false
  /// if u is not strictly feasible. On success d_ holds all eigenvalues,
  /// m_ the congruence-transformed coefficient blocks (for derivatives),
  /// logdet_ the barrier log-determinant.
  bool eval(const std::vector<double>& u, bool derivs) {
    for (int i = 0; i < p_; ++i)
      if (!(std::abs(u[i]) < cfg_.lambda_max)) return false;
    if (!(u[p_] < cap_)) return false;
    logdet_ = 0.0;
    int off = 0, dpos = 0;
    for (size_t bi = 0; bi < lmp_.blocks.size(); ++bi) {
      const int bs = lmp_.blocks[bi];
      // eb_ = block of A(y) - t*I
      for (int i = 0; i < bs; ++i)
        for (int j = 0; j < bs; ++j) {
          double v = lmp_.a0.at(off + i, off + j);
          for (int a = 0; a < p_; ++a) {
            const double ya = u[a];
            if (ya != 0.0) v += ya * lmp_.coeffs[a].at(off + i, off + j);
          }
          if (i == j) v -= u[p_];
          eb_[at(i, j, bs)] = v;
        }
      jacobi_buffers(bs, eb_.data(), qb_.data());
      for (int i = 0; i < bs; ++i) {
        const double ev = eb_[at(i, i, bs)];
        if (!(ev > 0.0)) return false;
        d_[dpos + i] = ev;
        logdet_ += std::log(ev);
      }
      if (derivs) {
        // m_[a] block = Q^t K_a Q, so tr(S^-1 K_a) and the Hessian read off
        // the eigenvalues directly.
        for (int a = 0; a < p_; ++a) {
          const SymmetricMatrix& ka = lmp_.coeffs[a];
          double* ma = &m_[static_cast<size_t>(a) * mb_ * mb_];
          for (int i = 0; i < bs; ++i)
            for (int j = 0; j < bs; ++j) {
              double s = 0.0;
              for (int l = 0; l < bs; ++l)
                s += ka.at(off + i, off + l) * qb_[at(l, j, bs)];
              wb_[at(i, j, bs)] = s;
            }
          for (int i = 0; i < bs; ++i)
            for (int j = i; j < bs; ++j) {
              double s = 0.0;
              for (int l = 0; l < bs; ++l)
                s += qb_[at(l, i, bs)] * wb_[at(l, j, bs)];
              ma[at(i, j, bs)] = s;
              ma[at(j, i, bs)] = s;
            }
        }
        accumulate_derivatives(bs, dpos);
      }
      off += bs;
      dpos += bs;
    }
    return true;
  }

  /// Adds this block's contributions to g_ (logdet part) and h_.
  void accumulate_derivatives(int bs, int dpos) {
    const double* d = &d_[dpos];
    for (int a = 0; a < p_; ++a) {
      const double* ma = &m_[static_cast<size_t>(a) * mb_ * mb_];
      double tr = 0.0;
      for (int i = 0; i < bs; ++i) tr += ma[at(i, i, bs)] / d[i];
      g_[a] -= tr;  // times mu later
      double trt = 0.0;
      for (int i = 0; i < bs; ++i) trt += ma[at(i, i, bs)] / (d[i] * d[i]);
      h_[at(a, p_, q_)] -= trt;
      h_[at(p_, a, q_)] -= trt;
      for (int b = a; b < p_; ++b) {
        const double* mb = &m_[static_cast<size_t>(b) * mb_ * mb_];
        double s = 0.0;
        for (int i = 0; i < bs; ++i)
          for (int j = 0; j < bs; ++j)
            s += ma[at(i, j, bs)] * mb[at(i, j, bs)] / (d[i] * d[j]);
        h_[at(a, b, q_)] += s;
        h_[at(b, a, q_)] = h_[at(a, b, q_)];
      }
    }
    double tr1 = 0.0, tr2 = 0.0;
    for (int i = 0; i < bs; ++i) {
      tr1 += 1.0 / d[i];
      tr2 += 1.0 / (d[i] * d[i]);
    }
    g_[p_] += tr1;
    h_[at(p_, p_, q_)] += tr2;
  }

  /// Barrier objective (to minimize): -t - mu*logdet - mu*box logs.
  double f_value(const std::vector<double>& u, double mu) const {
    double f = -u[p_] - mu * logdet_ - mu * std::log(cap_ - u[p_]);
    for (int i = 0; i < p_; ++i)
      f -= mu * (std::log(cfg_.lambda_max - u[i]) +
                 std::log(cfg_.lambda_max + u[i]));
    return f;
  }

  /// Cholesky solve h*x = b with escalating diagonal jitter.
  bool solve_newton() {
    double maxd = 0.0;
    for (int i = 0; i < q_; ++i) maxd = std::max(maxd, h_[at(i, i, q_)]);
    for (double jitter : {0.0, 1e-14, 1e-10, 1e-6}) {
      hc_ = h_;
      if (jitter > 0.0)
        for (int i = 0; i < q_; ++i) hc_[at(i, i, q_)] += jitter * maxd;
      bool ok = true;
      for (int i = 0; i < q_ && ok; ++i) {
        for (int j = 0; j <= i; ++j) {
          double s = hc_[at(i, j, q_)];
          for (int l = 0; l < j; ++l)
            s -= hc_[at(i, l, q_)] * hc_[at(j, l, q_)];
          if (i == j) {
            if (!(s > 0.0)) {
              ok = false;
              break;
            }
            hc_[at(i, i, q_)] = std::sqrt(s);
          } else {
            hc_[at(i, j, q_)] = s / hc_[at(j, j, q_)];
          }
        }
      }
      if (!ok) continue;
      // forward/back substitution of -g_
      for (int i = 0; i < q_; ++i) {
        double s = -g_[i];
        for (int l = 0; l < i; ++l) s -= hc_[at(i, l, q_)] * dir_[l];
        dir_[i] = s / hc_[at(i, i, q_)];
      }
      for (int i = q_ - 1; i >= 0; --i) {
        double s = dir_[i];
        for (int l = i + 1; l < q_; ++l) s -= hc_[at(l, i, q_)] * dir_[l];
        dir_[i] = s / hc_[at(i, i, q_)];
      }
      return true;
    }
    return false;
  }

  /// Newton loop at fixed mu. True when centered (small decrement), false
  /// when the step budget ran out first.
  bool center(double mu, int& steps) {
    for (int it = 0; it < 120; ++it) {
      if (steps >= cfg_.max_iter) return false;
      ++steps;
      std::fill(g_.begin(), g_.end(), 0.0);
      std::fill(h_.begin(), h_.end(), 0.0);
      if (!eval(u_, true))
        fail(ErrorCode::InvalidInput, "barrier iterate left the cone");
      const double fcur = f_value(u_, mu);
      for (int i = 0; i < q_; ++i) g_[i] *= mu;
      for (auto& v : h_) v *= mu;
      // objective and box/cap parts
      g_[p_] += -1.0 + mu / (cap_ - u_[p_]);
      h_[at(p_, p_, q_)] += mu / ((cap_ - u_[p_]) * (cap_ - u_[p_]));
      for (int i = 0; i < p_; ++i) {
        const double lo = cfg_.lambda_max + u_[i];
        const double hi = cfg_.lambda_max - u_[i];
        g_[i] += mu * (1.0 / hi - 1.0 / lo);
        h_[at(i, i, q_)] += mu * (1.0 / (hi * hi) + 1.0 / (lo * lo));
      }
      if (!solve_newton()) return true;  // numerically flat; accept center
      double dec2 = 0.0;
      for (int i = 0; i < q_; ++i) dec2 -= g_[i] * dir_[i];
      if (dec2 <= 1e-2 * mu) return true;
      double alpha = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 70; ++bt, alpha *= 0.5) {
        for (int i = 0; i < q_; ++i) cand_[i] = u_[i] + alpha * dir_[i];
        if (!eval(cand_, false)) continue;
        if (f_value(cand_, mu) <= fcur - 0.25 * alpha * dec2) {
          u_ = cand_;
          moved = true;
          break;
        }
      }
      if (!moved) return true;  // step size underflow; accept center
    }
    return true;
  }

  const LinearMatrixPolynomial& lmp_;
  const EngineConfig& cfg_;
  int n_, p_, q_;
  int mb_ = 0;
  double scale_, cap_;
  double logdet_ = 0.0;
  std::vector<double> u_, cand_, g_, dir_;
  std::vector<double> h_, hc_;
  std::vector<double> eb_, qb_, wb_, m_, d_;
};

/// Frobenius distance from A to the PSD cone and its smallest eigenvalue.
std::pair<double, double> cone_distance(const SymmetricMatrix& a) {
  EigenDecomposition ed = eigh(a);
  double dist2 = 0.0;
  for (double ev : ed.eigenvalues)
    if (ev < 0.0) dist2 += ev * ev;
  return {std::sqrt(dist2), ed.eigenvalues.front()};
}

Verdict decide_constant(const SymmetricMatrix& a, const EngineConfig& cfg) {
  const auto [dist, lmin] = cone_distance(a);
  Verdict v;
  v.margin = lmin;
  v.residual = dist;
  if (lmin >= -cfg.tol_feas) {
    v.kind = VerdictKind::In;
    v.residual = 0.0;
  } else if (dist >= cfg.out_threshold) {
    v.kind = VerdictKind::Out;
  } else {
    v.kind = VerdictKind::Unknown;
  }
  return v;
}

}  // namespace

Verdict find_psd_point(const LinearMatrixPolynomial& pencil,
                       const EngineConfig& cfg0) {
  const EngineConfig cfg = validated(cfg0);
  const LinearMatrixPolynomial lmp = validated(pencil);
  if (!lmp.a0.all_finite())
    fail(ErrorCode::InvalidInput, "pencil has non-finite entries");
  for (const auto& c : lmp.coeffs)
    if (!c.all_finite())
      fail(ErrorCode::InvalidInput, "pencil has non-finite entries");
  const int p = static_cast<int>(lmp.vars.size());
  if (p == 0) return decide_constant(lmp.a0, cfg);

  Barrier solver(lmp, cfg);
  const Barrier::Result res = solver.solve();
  const auto [dist, lmin] = cone_distance(evaluate(lmp, to_assignment(lmp.vars, res.y)));

  Verdict v;
  v.witness = to_assignment(lmp.vars, res.y);
  v.margin = lmin;
  v.iterations = res.newton_steps;
  // The witness realizes margin lmin; the certificate bounds every other
  // choice: no y in the box exceeds slack t_hat + gap, and the cone
  // distance of any pencil value dominates |lambda_min|.
  if (lmin >= -cfg.tol_feas) {
    v.kind = VerdictKind::In;
    v.residual = 0.0;
  } else if (res.certified && res.t_hat + res.gap <= -cfg.out_threshold) {
    v.kind = VerdictKind::Out;
    v.residual = dist;
  } else {
    v.kind = VerdictKind::Unknown;
    v.residual = dist;
  }
  return v;
}

Verdict membership(const SemidefRepresentation& s, const Assignment& x,
                   const EngineConfig& cfg) {
  for (const auto& name : s.visible)
    if (x.find(name) == x.end())
      fail(ErrorCode::VariableMismatch, "point misses variable " + name);
  if (x.size() != s.visible.size())
    fail(ErrorCode::VariableMismatch, "point has extra variables");
  return find_psd_point(partial_evaluate(s.pencil, x), cfg);
}

std::vector<Assignment> sample_feasible_points(
    const LinearMatrixPolynomial& pencil, const EngineConfig& cfg0,
    int count) {
  const EngineConfig cfg = validated(cfg0);
  const LinearMatrixPolynomial lmp = validated(pencil);
  std::vector<Assignment> out;
  if (count < 1) return out;
  const int p = static_cast<int>(lmp.vars.size());
  if (p == 0) {
    if (min_eigenvalue(lmp.a0) >= -cfg.tol_feas) out.push_back({});
    return out;
  }

  const Verdict base = find_psd_point(lmp, cfg);
  if (base.kind != VerdictKind::In) return out;
  std::vector<double> y0(p);
  for (int i = 0; i < p; ++i) y0[i] = base.witness.at(lmp.vars[i]);
  out.push_back(base.witness);

  // Walk from the interior witness along random directions; lambda_min is
  // concave along each ray, so a bisected endpoint keeps the whole segment
  // at least as feasible as the witness floor. The half-tolerance slack
  // lets walks move along flat sets instead of being pinned to the witness.
  const double floor = std::min(0.0, base.margin) - 0.5 * cfg.tol_feas;
  std::mt19937_64 rng(cfg.seed ^ 0x5DEECE66DULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> frac(0.2, 1.0);
  std::vector<double> d(p), y(p);
  const auto eig_at = [&](const std::vector<double>& v) {
    return min_eigenvalue(evaluate(lmp, to_assignment(lmp.vars, v)));
  };
  const int max_attempts = 3 * count + 6;
  for (int attempt = 0;
       attempt < max_attempts && static_cast<int>(out.size()) < count;
       ++attempt) {
    double norm = 0.0;
    for (double& v : d) {
      v = gauss(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-12) continue;
    // box limit along the ray
    double smax = cfg.lambda_max;
    for (int i = 0; i < p; ++i) {
      const double di = d[i] / norm;
      if (di > 1e-300)
        smax = std::min(smax, (cfg.lambda_max - y0[i]) / di);
      else if (di < -1e-300)
        smax = std::min(smax, (-cfg.lambda_max - y0[i]) / di);
    }
    double lo = 0.0, hi = std::max(smax, 0.0);
    const auto value_at = [&](double s) {
      for (int i = 0; i < p; ++i) y[i] = y0[i] + s * d[i] / norm;
      return eig_at(y);
    };
    if (value_at(hi) < floor) {
      for (int it = 0; it < 50 && hi - lo > 1e-9 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (value_at(mid) >= floor)
          lo = mid;
        else
          hi = mid;
      }
      hi = lo;
    }
    if (!(hi > 0.0)) continue;
    const double s = frac(rng) * hi;
    for (int i = 0; i < p; ++i) y[i] = y0[i] + s * d[i] / norm;
    out.push_back(to_assignment(lmp.vars, y));
  }
  return out;
}

Assignment interior_point(const SemidefRepresentation& s,
                          const EngineConfig& cfg0) {
  const EngineConfig cfg = validated(cfg0);
  const LinearMatrixPolynomial lmp = validated(s.pencil);
  const Verdict base = find_psd_point(lmp, cfg);
  if (base.kind != VerdictKind::In)
    fail(ErrorCode::EmptySet,
         std::string("no feasible point found (verdict ") +
             verdict_name(base.kind) + ")");

  EngineConfig probe = cfg;  // witnesses are In-certified either way
  probe.restarts = std::min(cfg.restarts, 2);

  // Largest t with pencil - t*dir >= 0 somewhere, by doubling + bisection.
  // Unknown probes count as infeasible; that only shrinks the margin.
  auto best_shift = [&](const SymmetricMatrix& dir) {
    auto probe_at = [&](double t) {
      LinearMatrixPolynomial shifted = lmp;
      shifted.a0 = shifted.a0 - dir.scaled(t);
      return find_psd_point(shifted, probe);
    };
    double lo = 0.0, hi = 1.0;
    Assignment w = base.witness;
    Verdict v = probe_at(1.0);
    if (v.kind == VerdictKind::In) {
      lo = 1.0;
      w = v.witness;
      while (lo < 1e8) {
        v = probe_at(2.0 * lo);
        if (v.kind != VerdictKind::In) break;
        lo *= 2.0;
        w = v.witness;
      }
      hi = 2.0 * lo;
      if (lo >= 1e8) return std::make_pair(lo, w);
    }
    while (hi - lo > 1e-3 * (1.0 + lo)) {
      const double mid = 0.5 * (lo + hi);
      v = probe_at(mid);
      if (v.kind == VerdictKind::In) {
        lo = mid;
        w = v.witness;
      } else {
        hi = mid;
      }
    }
    return std::make_pair(lo, w);
  };

  auto [t1, w1] = best_shift(SymmetricMatrix::identity(lmp.dim));
  if (t1 > cfg.tol_feas) return w1;

  // Flat set: the identity direction is blocked by the forced common kernel.
  // Estimate that kernel from sampled feasible values and push only along
  // its orthogonal complement.
  std::vector<Assignment> samples = sample_feasible_points(lmp, cfg, 20);
  if (samples.empty()) return base.witness;
  SymmetricMatrix sum(lmp.dim);
  for (const auto& y : samples) sum = sum + evaluate(lmp, y);
  sum = sum.scaled(1.0 / static_cast<double>(samples.size()));
  const double ktol = std::max(default_rank_tol(sum), 10.0 * cfg.tol_feas);
  Subspace common = kernel_basis(sum, ktol);
  if (common.rank() == 0 || common.rank() == lmp.dim) return base.witness;
  auto [t2, w2] = best_shift(common.orthogonal_complement().projector());
  if (t2 > cfg.tol_feas) return w2;
  return base.witness;
}

}  // namespace sdr
