#include "sdr/constructions.hpp"

#include <algorithm>
#include <set>

namespace sdr {

namespace {

void require_visible_functional(const SemidefRepresentation& s,
                                const AffineFunctional& l) {
  for (const auto& v : l.vars)
    if (std::find(s.visible.begin(), s.visible.end(), v) == s.visible.end())
      fail(ErrorCode::VariableMismatch,
           "functional variable " + v + " is not visible");
}

void require_same_visible(const SemidefRepresentation& a,
                          const SemidefRepresentation& b) {
  if (a.visible != b.visible)
    fail(ErrorCode::VariableMismatch, "visible variable lists differ");
}

/// Pencil with variables reordered to exactly `order` (same set).
LinearMatrixPolynomial aligned(const LinearMatrixPolynomial& lmp,
                               const std::vector<std::string>& order) {
  return embed_vars(lmp, order);
}

std::map<std::string, std::string> fresh_renaming(
    const std::vector<std::string>& from, FreshNames& names,
    std::vector<std::string>* out_names) {
  std::map<std::string, std::string> mapping;
  for (const auto& v : from) {
    const std::string nv = names.next();
    mapping[v] = nv;
    if (out_names != nullptr) out_names->push_back(nv);
  }
  return mapping;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ", ";
    out += p;
  }
  return out;
}

}  // namespace

ConstructionReport describe(const SemidefRepresentation& s) {
  ConstructionReport r;
  r.output_dim = s.pencil.dim;
  r.visible_count = static_cast<int>(s.visible.size());
  r.auxiliary_count = static_cast<int>(s.auxiliary.size());
  r.provenance = s.provenance;
  return r;
}

SemidefRepresentation exposed_face(const SemidefRepresentation& s,
                                   const AffineFunctional& l) {
  require_visible_functional(s, l);
  SemidefRepresentation out = s;
  out.pencil =
      direct_sum({s.pencil, scalar_block(l), scalar_block(l.negated())});
  out.provenance =
      "exposed_face(" + s.provenance + ", l: " + l.to_string() + ")";
  return out;
}

SemidefRepresentation remove_exposed_face(const SemidefRepresentation& s,
                                          const AffineFunctional& l,
                                          FreshNames& names) {
  require_visible_functional(s, l);
  const std::string lambda = names.next();
  SemidefRepresentation out = s;
  out.pencil = direct_sum({s.pencil, strict_pos_block(l, lambda)});
  out.auxiliary.push_back(lambda);
  out.provenance =
      "remove_face(" + s.provenance + ", l: " + l.to_string() + ")";
  return out;
}

SemidefRepresentation relative_interior(const SemidefRepresentation& s,
                                        FreshNames& names,
                                        const EngineConfig& cfg,
                                        const std::optional<Assignment>& z) {
  const LinearMatrixPolynomial lmp = validated(s.pencil);
  Assignment center;
  if (z.has_value()) {
    center = *z;
    const SymmetricMatrix az = evaluate(lmp, center);  // VariableMismatch here
    if (min_eigenvalue(az) < -10.0 * cfg.tol_feas)
      fail(ErrorCode::InvalidWitness, "witness is not feasible");
    const Subspace kz = kernel_basis(az);
    if (kz.rank() > 0) {
      // z must have the minimal kernel: ker A(z) inside ker A(w) for all
      // feasible w, checked against sampled points.
      for (const auto& w : sample_feasible_points(lmp, cfg, 10)) {
        const SymmetricMatrix aw = evaluate(lmp, w);
        const Subspace kw = kernel_basis(
            aw, std::max(default_rank_tol(aw), 10.0 * cfg.tol_feas));
        if (!subspace_contained(kz, kw))
          fail(ErrorCode::InvalidWitness,
               "witness kernel exceeds a sampled feasible kernel");
      }
    }
  } else {
    center = interior_point(s, cfg);  // EmptySet when infeasible
  }

  // delta*A0 + sum w_i A_i + (1-delta)*B with B = -sum z_i A_i = A0 - A(z):
  // affine in (w, delta), so the main block keeps the input block layout.
  const SymmetricMatrix b = lmp.a0 - evaluate(lmp, center);
  LinearMatrixPolynomial main;
  main.dim = lmp.dim;
  main.blocks = lmp.blocks;
  main.a0 = b;
  main.vars = lmp.vars;
  main.coeffs = lmp.coeffs;
  const std::string delta = names.next();
  main.vars.push_back(delta);
  main.coeffs.push_back(lmp.a0 - b);

  AffineFunctional delta_f = AffineFunctional::variable(delta);
  AffineFunctional one_minus_delta = delta_f.negated();
  one_minus_delta.constant = 1.0;
  const std::string lambda1 = names.next();
  const std::string lambda2 = names.next();

  SemidefRepresentation out;
  out.pencil = direct_sum({main, strict_pos_block(delta_f, lambda1),
                           strict_pos_block(one_minus_delta, lambda2)});
  out.visible = s.visible;
  out.auxiliary = s.auxiliary;
  out.auxiliary.push_back(delta);
  out.auxiliary.push_back(lambda1);
  out.auxiliary.push_back(lambda2);
  out.provenance = "relint(" + s.provenance + ")";
  out.relint_count = s.relint_count + 1;
  return out;
}

SemidefRepresentation kernel_containment(const SemidefRepresentation& s,
                                         const Subspace& w,
                                         FreshNames& names) {
  if (!s.auxiliary.empty())
    fail(ErrorCode::UnsupportedInput,
         "kernel containment needs a spectrahedron (no auxiliaries)");
  const LinearMatrixPolynomial lmp = aligned(validated(s.pencil), s.visible);
  const int k = lmp.dim;
  if (w.ambient_dim() != k)
    fail(ErrorCode::InvalidInput, "subspace ambient dim != pencil dim");
  const Subspace comp = w.orthogonal_complement();
  const int q = comp.rank();
  if (q == 0) {
    SemidefRepresentation out = s;
    out.provenance = "ker_subset(" + s.provenance + ", full space)";
    return out;
  }

  // Albert block [[A(x), B^t], [B, lambda I_q]], one fused block.
  const Matrix& basis = comp.basis();  // k x q, columns = rows of B
  LinearMatrixPolynomial alb;
  alb.dim = k + q;
  alb.blocks = {k + q};
  SymmetricMatrix a0(k + q);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) a0.set(i, j, lmp.a0.at(i, j));
  for (int i = 0; i < k; ++i)
    for (int c = 0; c < q; ++c) a0.set(i, k + c, basis.at(i, c));
  alb.a0 = a0;
  alb.vars = lmp.vars;
  for (const auto& coeff : lmp.coeffs) {
    SymmetricMatrix big(k + q);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) big.set(i, j, coeff.at(i, j));
    alb.coeffs.push_back(big);
  }
  const std::string lambda = names.next();
  alb.vars.push_back(lambda);
  SymmetricMatrix lam(k + q);
  for (int c = 0; c < q; ++c) lam.set(k + c, k + c, 1.0);
  alb.coeffs.push_back(lam);

  SemidefRepresentation out;
  out.pencil = alb;
  out.visible = s.visible;
  out.auxiliary = {lambda};
  out.provenance = "ker_subset(" + s.provenance + ", corank " +
                   std::to_string(q) + ")";
  out.relint_count = s.relint_count;
  return out;
}

namespace {

/// Spectrahedron case of the looparrow construction: S given by pencil A
/// over exactly the visible variables.
SemidefRepresentation looparrow_spectrahedron(const SemidefRepresentation& t,
                                              const SemidefRepresentation& s,
                                              FreshNames& names) {
  const LinearMatrixPolynomial a = aligned(validated(s.pencil), s.visible);
  const int k = a.dim;
  const int nvis = static_cast<int>(s.visible.size());

  std::vector<std::string> zvars;
  const auto z_map = fresh_renaming(s.visible, names, &zvars);

  // [[A(x), A(z)], [A(z), lambda I_k]]: one fused 2k block.
  LinearMatrixPolynomial alb;
  alb.dim = 2 * k;
  alb.blocks = {2 * k};
  SymmetricMatrix a0(2 * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (j >= i) a0.set(i, j, a.a0.at(i, j));
      a0.set(i, k + j, a.a0.at(i, j));
    }
  alb.a0 = a0;
  for (int v = 0; v < nvis; ++v) {
    const SymmetricMatrix& coeff = a.coeffs[static_cast<size_t>(v)];
    SymmetricMatrix cx(2 * k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) cx.set(i, j, coeff.at(i, j));
    alb.vars.push_back(s.visible[static_cast<size_t>(v)]);
    alb.coeffs.push_back(cx);
  }
  for (int v = 0; v < nvis; ++v) {
    const SymmetricMatrix& coeff = a.coeffs[static_cast<size_t>(v)];
    SymmetricMatrix cz(2 * k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) cz.set(i, k + j, coeff.at(i, j));
    alb.vars.push_back(zvars[static_cast<size_t>(v)]);
    alb.coeffs.push_back(cz);
  }
  const std::string lambda = names.next();
  SymmetricMatrix lam(2 * k);
  for (int i = 0; i < k; ++i) lam.set(k + i, k + i, 1.0);
  alb.vars.push_back(lambda);
  alb.coeffs.push_back(lam);

  // T's pencil over (z, fresh auxiliaries) pins z into T.
  std::vector<std::string> t_aux;
  auto t_map = fresh_renaming(t.auxiliary, names, &t_aux);
  for (size_t v = 0; v < s.visible.size(); ++v)
    t_map[s.visible[v]] = zvars[v];
  const LinearMatrixPolynomial bt = rename_vars(t.pencil, t_map);

  SemidefRepresentation out;
  out.pencil = direct_sum({alb, bt});
  out.visible = s.visible;
  out.auxiliary = zvars;
  out.auxiliary.insert(out.auxiliary.end(), t_aux.begin(), t_aux.end());
  out.auxiliary.push_back(lambda);
  out.provenance =
      "looparrow(t: " + t.provenance + ", s: " + s.provenance + ")";
  out.relint_count = s.relint_count + t.relint_count;
  return out;
}

}  // namespace

SemidefRepresentation looparrow(const SemidefRepresentation& t,
                                const SemidefRepresentation& s,
                                FreshNames& names) {
  require_same_visible(t, s);
  if (s.auxiliary.empty()) return looparrow_spectrahedron(t, s, names);

  // Lift: S~ is S's spectrahedron over (x, y); T~ = S~ cap pr^-1(T) adds T's
  // constraint on x. Apply the spectrahedron case there, then hide y again.
  std::vector<std::string> lifted_vars = s.visible;
  lifted_vars.insert(lifted_vars.end(), s.auxiliary.begin(),
                     s.auxiliary.end());
  SemidefRepresentation s_lift;
  s_lift.pencil = aligned(validated(s.pencil), lifted_vars);
  s_lift.visible = lifted_vars;
  s_lift.provenance = "lift(" + s.provenance + ")";
  s_lift.relint_count = s.relint_count;

  std::vector<std::string> t_aux;
  const auto t_map = fresh_renaming(t.auxiliary, names, &t_aux);
  SemidefRepresentation t_lift;
  t_lift.pencil =
      direct_sum({s_lift.pencil, rename_vars(t.pencil, t_map)});
  t_lift.visible = lifted_vars;
  t_lift.auxiliary = t_aux;
  t_lift.provenance = "lift(" + t.provenance + ")";
  t_lift.relint_count = t.relint_count;

  SemidefRepresentation lifted = looparrow_spectrahedron(t_lift, s_lift, names);
  SemidefRepresentation out;
  out.pencil = lifted.pencil;
  out.visible = s.visible;
  out.auxiliary = s.auxiliary;
  out.auxiliary.insert(out.auxiliary.end(), lifted.auxiliary.begin(),
                       lifted.auxiliary.end());
  out.provenance =
      "looparrow(t: " + t.provenance + ", s: " + s.provenance + ")";
  out.relint_count = lifted.relint_count;
  return out;
}

SemidefRepresentation intersect(const std::vector<SemidefRepresentation>& parts,
                                FreshNames& names) {
  if (parts.empty()) fail(ErrorCode::InvalidInput, "intersect of nothing");
  for (const auto& p : parts) require_same_visible(parts.front(), p);
  std::vector<LinearMatrixPolynomial> pencils;
  std::vector<std::string> aux;
  std::vector<std::string> provs;
  int relints = 0;
  for (const auto& p : parts) {
    const auto mapping = fresh_renaming(p.auxiliary, names, &aux);
    pencils.push_back(rename_vars(validated(p.pencil), mapping));
    provs.push_back(p.provenance);
    relints += p.relint_count;
  }
  SemidefRepresentation out;
  out.pencil = direct_sum(pencils);
  out.visible = parts.front().visible;
  out.auxiliary = std::move(aux);
  out.provenance = "intersect(" + join(provs) + ")";
  out.relint_count = relints;
  return out;
}

SemidefRepresentation project(const SemidefRepresentation& s,
                              const std::vector<std::string>& keep) {
  std::set<std::string> kept;
  for (const auto& v : keep) {
    if (std::find(s.visible.begin(), s.visible.end(), v) == s.visible.end())
      fail(ErrorCode::VariableMismatch, "cannot keep unknown variable " + v);
    if (!kept.insert(v).second)
      fail(ErrorCode::VariableMismatch, "duplicate keep variable " + v);
  }
  SemidefRepresentation out = s;
  out.visible = keep;
  for (const auto& v : s.visible)
    if (kept.find(v) == kept.end()) out.auxiliary.push_back(v);
  out.provenance =
      "project(" + s.provenance + ", keep: " + join(keep) + ")";
  return out;
}

SemidefRepresentation conv_union(const SemidefRepresentation& a,
                                 const SemidefRepresentation& b,
                                 FreshNames& names) {
  require_same_visible(a, b);
  const size_t nvis = a.visible.size();

  std::vector<std::string> u, v;
  auto a_map = fresh_renaming(a.visible, names, &u);
  auto b_map = fresh_renaming(b.visible, names, &v);
  std::vector<std::string> aux;
  for (const auto& [from, to] : fresh_renaming(a.auxiliary, names, &aux))
    a_map[from] = to;
  for (const auto& [from, to] : fresh_renaming(b.auxiliary, names, &aux))
    b_map[from] = to;
  const std::string t = names.next();
  const std::string t2 = names.next();  // transient stand-in for 1 - t

  // u in t*A, v in (1-t)*B: homogenize every lifted variable.
  const LinearMatrixPolynomial part_a =
      homogenize(rename_vars(validated(a.pencil), a_map), t);
  AffineFunctional one_minus_t = AffineFunctional::variable(t).negated();
  one_minus_t.constant = 1.0;
  const LinearMatrixPolynomial part_b = substitute_var(
      homogenize(rename_vars(validated(b.pencil), b_map), t2), t2, one_minus_t);

  std::vector<LinearMatrixPolynomial> blocks;
  blocks.push_back(part_a);
  blocks.push_back(part_b);
  blocks.push_back(scalar_block(AffineFunctional::variable(t)));
  blocks.push_back(scalar_block(one_minus_t));
  for (size_t i = 0; i < nvis; ++i) {
    // x_i = u_i + v_i as a pair of opposite 1x1 rows
    AffineFunctional eq;
    eq.vars = {a.visible[i], u[i], v[i]};
    eq.gradient = {1.0, -1.0, -1.0};
    blocks.push_back(scalar_block(eq));
    blocks.push_back(scalar_block(eq.negated()));
  }

  SemidefRepresentation out;
  out.pencil = direct_sum(blocks);
  out.visible = a.visible;
  out.auxiliary = u;
  out.auxiliary.insert(out.auxiliary.end(), v.begin(), v.end());
  out.auxiliary.insert(out.auxiliary.end(), aux.begin(), aux.end());
  out.auxiliary.push_back(t);
  out.provenance =
      "conv_union(" + a.provenance + ", " + b.provenance + ")";
  out.relint_count = a.relint_count + b.relint_count;
  return out;
}

}  // namespace sdr
