#include "sdr/verify.hpp"

#include <cmath>
#include <random>

#include <json.hpp>

#include "sdr/constructions.hpp"
#include "sdr/oracle.hpp"

namespace sdr {

namespace {

using nlohmann::json;

LinearMatrixPolynomial disk_pencil() {
  LinearMatrixPolynomial p;
  p.dim = 2;
  p.vars = {"x1", "x2"};
  p.a0 = SymmetricMatrix(2, {1, 0, 0, 1});
  p.coeffs = {SymmetricMatrix(2, {-1, 0, 0, 1}),
              SymmetricMatrix(2, {0, 1, 1, 0})};
  return validated(std::move(p));
}

LinearMatrixPolynomial segment_pencil() {
  // diag(x1, 1 - x1, x2, -x2): the segment [0,1] x {0}.
  const AffineFunctional x1 = AffineFunctional::variable("x1");
  const AffineFunctional x2 = AffineFunctional::variable("x2");
  return direct_sum({scalar_block(x1), scalar_block(parse_affine("1 - x1")),
                     scalar_block(x2), scalar_block(x2.negated())});
}

void tally(CampaignReport& rep, json probe, VerdictKind engine, bool oracle) {
  ++rep.trials;
  if (engine == VerdictKind::Unknown) {
    ++rep.unknowns;
    return;
  }
  if ((engine == VerdictKind::In) == oracle) {
    ++rep.agreements;
    return;
  }
  ++rep.disagreements;
  probe["campaign"] = rep.name;
  probe["engine"] = verdict_name(engine);
  probe["oracle"] = oracle ? "In" : "Out";
  rep.jsonl.push_back(probe.dump());
}

void finish(CampaignReport& rep) {
  json summary;
  summary["campaign"] = rep.name;
  summary["trials"] = rep.trials;
  summary["agreements"] = rep.agreements;
  summary["disagreements"] = rep.disagreements;
  summary["unknowns"] = rep.unknowns;
  summary["passed"] = rep.passed();
  rep.jsonl.push_back(summary.dump());
}

// ---- albert ---------------------------------------------------------------

// Random pairs (A, B) with a known margin: either B = C*A exactly (kernel
// containment holds), B = C*A + d*v^t pushed along a kernel vector v of A
// with ||d|| >= 0.5 (containment robustly fails), or A of full rank (any B
// works). The engine decides "exists lambda: [[A, B^t], [B, lambda I]] >= 0"
// on the fused pencil; the oracle applies the pseudoinverse criterion.
CampaignReport campaign_albert(int samples, EngineConfig cfg) {
  // Instances are scaled for a box of this size: feasible pairs need
  // lambda below ~2e2, infeasible ones keep a cone distance >= 6e-6.
  cfg.lambda_max = std::min(cfg.lambda_max, 1e4);
  cfg = validated(cfg);
  CampaignReport rep;
  rep.name = "albert";
  std::mt19937_64 rng(cfg.seed ^ 0xa1be27ULL);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> eig(0.3, 3.0);
  std::uniform_real_distribution<double> push(0.5, 1.5);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int trial = 0; trial < samples; ++trial) {
    const int k = 2 + trial % 4;
    const int q = 1 + trial % 3;
    const int type = trial % 5;  // 0,1: contained; 2,3: violated; 4: full rank

    Matrix qmat(k, k);
    while (true) {
      Matrix g(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) g.at(i, j) = gauss(rng);
      const Subspace span = Subspace::from_spanning(k, g);
      if (span.rank() == k) {
        qmat = span.basis();
        break;
      }
    }
    const int corank =
        type == 4 ? 0 : 1 + static_cast<int>(rng() % static_cast<unsigned>(k - 1));
    std::vector<double> d(k, 0.0);
    for (int j = corank; j < k; ++j) d[j] = eig(rng);
    SymmetricMatrix a(k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        double v = 0.0;
        for (int l = 0; l < k; ++l) v += d[l] * qmat.at(i, l) * qmat.at(j, l);
        a.set(i, j, v);
      }

    Matrix b(q, k);
    if (type == 4) {
      for (int r = 0; r < q; ++r)
        for (int j = 0; j < k; ++j) b.at(r, j) = unit(rng);
    } else {
      Matrix c(q, k);
      for (int r = 0; r < q; ++r)
        for (int j = 0; j < k; ++j) c.at(r, j) = unit(rng);
      b = c * a.to_matrix();
      if (type == 2 || type == 3) {
        std::vector<double> dv(q);
        double norm = 0.0;
        for (int r = 0; r < q; ++r) {
          dv[r] = unit(rng);
          norm += dv[r] * dv[r];
        }
        norm = std::sqrt(norm);
        if (norm < 1e-3) {
          dv.assign(q, 0.0);
          dv[0] = 1.0;
          norm = 1.0;
        }
        const double scale = push(rng) / norm;
        for (int r = 0; r < q; ++r)
          for (int j = 0; j < k; ++j)
            b.at(r, j) += scale * dv[r] * qmat.at(j, 0);
      }
    }

    const bool oracle = albert_criterion(a, b);

    LinearMatrixPolynomial fused;
    fused.dim = k + q;
    fused.vars = {"lambda"};
    SymmetricMatrix a0(k + q);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) a0.set(i, j, a.at(i, j));
    for (int r = 0; r < q; ++r)
      for (int j = 0; j < k; ++j) a0.set(k + r, j, b.at(r, j));
    fused.a0 = a0;
    SymmetricMatrix lam(k + q);
    for (int r = 0; r < q; ++r) lam.set(k + r, k + r, 1.0);
    fused.coeffs = {lam};
    const Verdict v = find_psd_point(validated(std::move(fused)), cfg);

    json probe;
    probe["trial"] = trial;
    probe["k"] = k;
    probe["q"] = q;
    probe["type"] = type;
    tally(rep, std::move(probe), v.kind, oracle);
  }
  finish(rep);
  return rep;
}

// ---- relint ---------------------------------------------------------------

// relative_interior of the unit disk and of a flat segment, engine verdicts
// against the eps-push oracle. Probes keep a 2e-3 margin from the true
// boundary, matching the resolution limit of the boxed engine.
CampaignReport campaign_relint(int samples, EngineConfig cfg) {
  cfg = validated(cfg);
  CampaignReport rep;
  rep.name = "relint";
  std::mt19937_64 rng(cfg.seed ^ 0x3e11f7ULL);
  std::uniform_real_distribution<double> box(-1.5, 1.5);
  std::uniform_real_distribution<double> seg(-0.5, 1.5);
  std::uniform_real_distribution<double> off(-0.5, 0.5);

  FreshNames names;
  const Assignment disk_center{{"x1", 0.0}, {"x2", 0.0}};
  const Assignment seg_center{{"x1", 0.5}, {"x2", 0.0}};
  const SemidefRepresentation rdisk = relative_interior(
      spectrahedron(disk_pencil()), names, cfg, disk_center);
  const SemidefRepresentation rseg = relative_interior(
      spectrahedron(segment_pencil()), names, cfg, seg_center);

  const MembershipFn disk_member = [](const Assignment& p) {
    return std::hypot(p.at("x1"), p.at("x2")) <= 1.0 + 1e-12;
  };
  const MembershipFn seg_member = [](const Assignment& p) {
    return std::abs(p.at("x2")) <= 1e-9 && p.at("x1") >= -1e-9 &&
           p.at("x1") <= 1.0 + 1e-9;
  };

  for (int trial = 0; trial < samples; ++trial) {
    Assignment x;
    const SemidefRepresentation* rep_sdr;
    const MembershipFn* member;
    const Assignment* center;
    if (trial % 2 == 0) {
      double x1, x2;
      do {
        x1 = box(rng);
        x2 = box(rng);
      } while (std::abs(std::hypot(x1, x2) - 1.0) <= 2e-3);
      x = {{"x1", x1}, {"x2", x2}};
      rep_sdr = &rdisk;
      member = &disk_member;
      center = &disk_center;
    } else {
      double t;
      do {
        t = seg(rng);
      } while (std::abs(t) <= 2e-3 || std::abs(t - 1.0) <= 2e-3);
      double s = 0.0;
      if (trial % 10 == 1) {
        do {
          s = off(rng);
        } while (std::abs(s) <= 2e-3);
      }
      x = {{"x1", t}, {"x2", s}};
      rep_sdr = &rseg;
      member = &seg_member;
      center = &seg_center;
    }
    const Verdict v = membership(*rep_sdr, x, cfg);
    const bool oracle = relint_member(*member, *center, x);
    json probe;
    probe["trial"] = trial;
    probe["x1"] = x.at("x1");
    probe["x2"] = x.at("x2");
    tally(rep, std::move(probe), v.kind, oracle);
  }
  finish(rep);
  return rep;
}

// ---- facechar -------------------------------------------------------------

// Faces of the unit disk: the segment characterization "some x + eps*(x - u)
// stays in S" against the kernel containment ker A(x) <= ker A(u). Distinct
// boundary points are kept >= 1e-2 radians apart so both sides are robust.
CampaignReport campaign_facechar(int samples, EngineConfig cfg) {
  cfg = validated(cfg);
  CampaignReport rep;
  rep.name = "facechar";
  std::mt19937_64 rng(cfg.seed ^ 0xfacec4ULL);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> radius(0.0, 0.95);
  std::uniform_real_distribution<double> gap(1e-2, M_PI);

  const LinearMatrixPolynomial disk = disk_pencil();
  const MembershipFn member = [](const Assignment& p) {
    return std::hypot(p.at("x1"), p.at("x2")) <= 1.0 + 1e-12;
  };
  const auto circle = [](double th) {
    return Assignment{{"x1", std::cos(th)}, {"x2", std::sin(th)}};
  };

  for (int trial = 0; trial < samples; ++trial) {
    const bool x_interior = trial % 5 == 4;
    const double th1 = angle(rng);
    Assignment x;
    if (x_interior) {
      const double r = radius(rng);
      x = {{"x1", r * std::cos(th1)}, {"x2", r * std::sin(th1)}};
    } else {
      x = circle(th1);
    }

    Assignment u;
    if (trial % 4 == 0 && !x_interior) {
      u = x;  // same point, bitwise
    } else if (trial % 2 == 0) {
      const double r = radius(rng);
      const double th = angle(rng);
      u = {{"x1", r * std::cos(th)}, {"x2", r * std::sin(th)}};
    } else {
      const double sign = rng() % 2 == 0 ? 1.0 : -1.0;
      u = circle(th1 + sign * gap(rng));
    }

    const bool geometric = face_eps_characterization(member, x, u);
    const bool algebraic =
        subspace_contained(face_of_point(disk, x), face_of_point(disk, u));
    json probe;
    probe["trial"] = trial;
    probe["x1"] = x.at("x1");
    probe["x2"] = x.at("x2");
    probe["u1"] = u.at("x1");
    probe["u2"] = u.at("x2");
    tally(rep, std::move(probe),
          algebraic ? VerdictKind::In : VerdictKind::Out, geometric);
  }
  finish(rep);
  return rep;
}

// ---- looparrow ------------------------------------------------------------

// T = lower half of the unit disk, S = the disk. (T la S) keeps the open
// disk plus the closed lower boundary arc. The constructed pencil is checked
// against the sampled-kernel oracle; probes on the retained arc are the
// tangent cases where the engine may honestly answer Unknown.
CampaignReport campaign_looparrow(int samples, EngineConfig cfg) {
  // The fused Albert block resolves kernel containment at scale 1/lambda_max;
  // probes keep a 0.05 margin from the circle, so a box of 1e2 separates
  // cleanly while In points need lambda only up to ~4/0.05.
  cfg.lambda_max = std::min(cfg.lambda_max, 1e2);
  cfg = validated(cfg);
  CampaignReport rep;
  rep.name = "looparrow";
  std::mt19937_64 rng(cfg.seed ^ 0x100b44ULL);
  std::uniform_real_distribution<double> box(-1.5, 1.5);

  FreshNames names;
  const LinearMatrixPolynomial disk = disk_pencil();
  const SemidefRepresentation s = spectrahedron(disk);
  const SemidefRepresentation lower = spectrahedron(
      embed_vars(scalar_block(parse_affine("-x2")), {"x1", "x2"}));
  const SemidefRepresentation t = intersect({s, lower}, names);
  const SemidefRepresentation l = looparrow(t, s, names);

  const MembershipFn t_member = [](const Assignment& p) {
    return std::hypot(p.at("x1"), p.at("x2")) <= 1.0 + 1e-12 &&
           p.at("x2") <= 1e-12;
  };
  std::vector<Assignment> t_sample = rejection_sample(
      t_member, {"x1", "x2"}, {{-1.0, 1.0}, {-1.0, 0.0}}, 500,
      cfg.seed ^ 0x7e11ULL);
  for (int j = 0; j < 64; ++j) {
    const double th = M_PI + j * M_PI / 63.0;
    t_sample.push_back({{"x1", std::cos(th)}, {"x2", std::sin(th)}});
  }

  std::vector<Assignment> probes;
  for (int j = 0; j < 20; ++j) {
    const double th = M_PI + 0.05 + j * (M_PI - 0.1) / 19.0;
    const Assignment p{{"x1", std::cos(th)}, {"x2", std::sin(th)}};
    probes.push_back(p);
    t_sample.push_back(p);
  }
  probes.push_back({{"x1", 1.0}, {"x2", 0.0}});
  probes.push_back({{"x1", -1.0}, {"x2", 0.0}});
  t_sample.push_back({{"x1", 1.0}, {"x2", 0.0}});
  t_sample.push_back({{"x1", -1.0}, {"x2", 0.0}});
  for (const double th : {0.3, 1.0, 2.0, 2.8})
    probes.push_back({{"x1", std::cos(th)}, {"x2", std::sin(th)}});
  for (int i = 0; i < samples; ++i) {
    double x1, x2;
    do {
      x1 = box(rng);
      x2 = box(rng);
    } while (std::abs(std::hypot(x1, x2) - 1.0) <= 0.05);
    probes.push_back({{"x1", x1}, {"x2", x2}});
  }

  for (size_t i = 0; i < probes.size(); ++i) {
    const Verdict v = membership(l, probes[i], cfg);
    const bool oracle = looparrow_member(t_sample, disk, probes[i]);
    json probe;
    probe["trial"] = static_cast<int>(i);
    probe["x1"] = probes[i].at("x1");
    probe["x2"] = probes[i].at("x2");
    tally(rep, std::move(probe), v.kind, oracle);
  }
  finish(rep);
  return rep;
}

}  // namespace

std::vector<std::string> campaign_names() {
  return {"albert", "relint", "facechar", "looparrow"};
}

CampaignReport run_campaign(const std::string& name, int samples,
                            const EngineConfig& cfg) {
  if (samples < 1)
    fail(ErrorCode::InvalidInput, "campaign needs at least one sample");
  if (name == "albert") return campaign_albert(samples, cfg);
  if (name == "relint") return campaign_relint(samples, cfg);
  if (name == "facechar") return campaign_facechar(samples, cfg);
  if (name == "looparrow") return campaign_looparrow(samples, cfg);
  fail(ErrorCode::UnknownCampaign,
       "no campaign named \"" + name + "\" (try albert, relint, facechar, looparrow)");
}

}  // namespace sdr
