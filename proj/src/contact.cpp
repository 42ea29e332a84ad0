#include "crf/contact.hpp"

namespace crf {

namespace {

constexpr int kProbePoints = 16;

double mat_residual(const ExprMat& a, const Point& p) {
  double r = 0;
  for (auto& row : a)
    for (auto& e : row) r = std::max(r, std::abs(eval(e, p)));
  return r;
}

// pullback of a k-form through an endomorphism (all arguments transformed)
TwoFormField pullback(const TwoFormField& w, const EndField& f) {
  // (w^c)_{ij} = w(F e_i, F e_j) = F^a_i F^b_j w_{ab}
  return {emul(etranspose(f.c), emul(w.c, f.c))};
}

ThreeFormField pullback(const ThreeFormField& w, const EndField& f) {
  int m = w.dim();
  ThreeFormField out = zero_threeform(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        ExprPtr s = lit(0);
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) {
              ExprPtr term = mul(mul(f.c[a][i], f.c[b][j]), mul(f.c[c][k], w.c[a][b][c]));
              s = add(s, term);
            }
        out.c[i][j][k] = s;
      }
  return out;
}

// shuffle wedge of a 1-form with a 3-form (no factors), then i(Z)
ThreeFormField interior_wedge14(const VectorField& z, const OneFormField& xi,
                                const ThreeFormField& w) {
  int m = z.dim();
  // Theta_{ijkl} = xi_i w_{jkl} - xi_j w_{ikl} + xi_k w_{ijl} - xi_l w_{ijk};
  // (i(Z) Theta)_{jkl} = Z^i Theta_{ijkl}
  ThreeFormField out = zero_threeform(m);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) {
        ExprPtr s = lit(0);
        for (int i = 0; i < m; ++i) {
          ExprPtr t = mul(xi.c[i], w.c[j][k][l]);
          t = sub(t, mul(xi.c[j], w.c[i][k][l]));
          t = add(t, mul(xi.c[k], w.c[i][j][l]));
          t = sub(t, mul(xi.c[l], w.c[i][j][k]));
          s = add(s, mul(z.c[i], t));
        }
        out.c[j][k][l] = s;
      }
  return out;
}

ExprMat add_forms(const ExprMat& a, const ExprMat& b) { return eadd(a, b); }

}  // namespace

void validate_acm(const AlmostContactMetric& acm, double tol) {
  int m = acm.m();
  auto pts = sample_points(acm.dom, kProbePoints, 42);
  // gamma(FX, FY) = gamma(X,Y) - xi(X) xi(Y)
  ExprMat lhs = emul(etranspose(acm.F.c), emul(acm.gamma.c, acm.F.c));
  ExprMat rhs = acm.gamma.c;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) rhs[i][j] = sub(rhs[i][j], mul(acm.xi.c[i], acm.xi.c[j]));
  ExprMat metric_res = esub(lhs, rhs);

  ExprVec flatz = eapply(acm.gamma.c, acm.Z.c);
  ExprVec xi_res = evec_sub(flatz, acm.xi.c);
  ExprPtr unit_res = sub(edot(flatz, acm.Z.c), lit(1));
  ExprVec zF = eapply(etranspose(acm.F.c), flatz);  // gamma(Z, F e_j)

  for (const auto& p : pts) {
    double r = mat_residual(metric_res, p);
    if (r > tol)
      throw StructureError("almost contact metric: gamma(FX,FY) != gamma(X,Y)-xi(X)xi(Y)", r);
    for (auto& e : xi_res) {
      double v = std::abs(eval(e, p));
      if (v > tol) throw StructureError("almost contact metric: xi != flat_gamma Z", v);
    }
    double u = std::abs(eval(unit_res, p));
    if (u > tol) throw StructureError("almost contact metric: gamma(Z,Z) != 1", u);
    for (auto& e : zF) {
      double v = std::abs(eval(e, p));
      if (v > tol) throw StructureError("almost contact metric: gamma(Z, F .) != 0", v);
    }
  }
}

TwoFormField fundamental_form(const AlmostContactMetric& acm) {
  // Xi_{ij} = gamma(F e_i, e_j) = F^k_i gamma_{kj}
  return {emul(etranspose(acm.F.c), acm.gamma.c)};
}

ProductLift product_lift(const AlmostContactMetric& acm) {
  int m = acm.m();
  int n = m + 1;
  ProductLift out;
  out.dom = with_factors(acm.dom, 1);
  ExprPtr et = exp_e(coord(n));

  out.J = EndField{ezero_mat(n, n)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out.J.c[i][j] = acm.F.c[i][j];
  for (int i = 0; i < m; ++i) {
    out.J.c[i][n - 1] = acm.Z.c[i];       // J d/dt = Z
    out.J.c[n - 1][i] = neg(acm.xi.c[i]);  // J X has -xi(X) d/dt
  }

  out.Gamma = MetricField{ezero_mat(n, n)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out.Gamma.c[i][j] = mul(et, acm.gamma.c[i][j]);
  out.Gamma.c[n - 1][n - 1] = et;

  TwoFormField Xi = fundamental_form(acm);
  out.omega = TwoFormField{ezero_mat(n, n)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out.omega.c[i][j] = mul(et, Xi.c[i][j]);
  for (int i = 0; i < m; ++i) {
    out.omega.c[i][n - 1] = neg(mul(et, acm.xi.c[i]));  // -(xi ^ dt)
    out.omega.c[n - 1][i] = mul(et, acm.xi.c[i]);
  }
  return out;
}

CheckReport check_normality(const AlmostContactMetric& acm, const CheckConfig& cfg) {
  int m = acm.m();
  AlmostContact ac;
  ac.dom = acm.dom;
  ac.P = BivectorField{ezero_mat(m, m)};
  ac.theta = TwoFormField{ezero_mat(m, m)};
  ac.F = acm.F;
  ac.Z = {acm.Z};
  ac.xi = {acm.xi};
  (void)from_almost_contact(ac);  // validates the defining identities
  GeneralizedF lift = lift_to_product(ac);
  CheckReport rep = check_integrability(lift, cfg);
  rep.name = "normality";
  return rep;
}

CheckReport check_cosymplectic(const AlmostContactMetric& acm, const CheckConfig& cfg) {
  validate_acm(acm);
  int m = acm.m();
  TwoFormField dxi = d_oneform(acm.xi);
  ThreeFormField dXi = d_twoform(fundamental_form(acm));
  auto pts = sample_points(acm.dom, cfg.samples, cfg.seed);
  PointResidual f = [dxi, dXi, m](EvalContext& ctx) {
    double r = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        r = std::max(r, std::abs(ctx.value(dxi.c[i][j])));
        for (int k = 0; k < m; ++k) r = std::max(r, std::abs(ctx.value(dXi.c[i][j][k])));
      }
    return r;
  };
  CheckReport forms = scan_points("cosymplectic-forms", f, acm.dom, pts, cfg);
  CheckReport normal = check_normality(acm, cfg);
  return merge_reports("cosymplectic", {forms, normal});
}

namespace {

CheckReport sasakian_direct(const AlmostContactMetric& acm, const TwoFormField& mu,
                            const ThreeFormField& dpsi, double sign, const CheckConfig& cfg) {
  int m = acm.m();
  // condition 1: i(Z) mu = 0
  OneFormField c1 = interior_two(acm.Z, mu);
  // (L_Z mu)^c
  TwoFormField lzmu{lie_cov2(acm.Z, mu.c)};
  EndField F = acm.F;
  TwoFormField lzmu_c = pullback(lzmu, F);
  // condition 2: mu^c + L_Z[(L_Z mu)^c] = 0
  TwoFormField mu_c = pullback(mu, F);
  ExprMat c2 = add_forms(mu_c.c, lie_cov2(acm.Z, lzmu_c.c));
  // condition 3: (d psi)^c + i(Z)[xi ^ d (L_Z mu)^c] = 0
  ThreeFormField dpsi_c = pullback(dpsi, F);
  ThreeFormField w = d_twoform(lzmu_c);
  ThreeFormField iz = interior_wedge14(acm.Z, acm.xi, w);
  // condition 4: Xi - d xi + sign * (L_Z mu)^c = 0
  TwoFormField Xi = fundamental_form(acm);
  ExprMat c4 = esub(Xi.c, d_oneform(acm.xi).c);
  c4 = eadd(c4, escale(lit(sign), lzmu_c.c));

  auto pts = sample_points(acm.dom, cfg.samples, cfg.seed);
  PointResidual f = [c1, c2, dpsi_c, iz, c4, m](EvalContext& ctx) {
    double r = 0;
    for (auto& e : c1.c) r = std::max(r, std::abs(ctx.value(e)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        r = std::max(r, std::abs(ctx.value(c2[i][j])));
        r = std::max(r, std::abs(ctx.value(c4[i][j])));
        for (int k = 0; k < m; ++k)
          r = std::max(r, std::abs(ctx.value(add(dpsi_c.c[i][j][k], iz.c[i][j][k]))));
      }
    return r;
  };
  return scan_points(sign > 0 ? "sasakian-plus" : "sasakian-minus", f, acm.dom, pts, cfg);
}

}  // namespace

CheckReport check_generalized_sasakian(const SasakiInput& s, const CheckConfig& cfg) {
  validate_acm(s.plus);
  validate_acm(s.minus);
  CheckReport np = check_normality(s.plus, cfg);
  CheckReport nm = check_normality(s.minus, cfg);
  if (!np.pass || !nm.pass)
    throw StructureError("generalized Sasakian input is not normal",
                         std::max(np.residual, nm.residual));
  TwoFormField mu{eadd(s.psi.c, d_oneform(s.kappa).c)};
  ThreeFormField dpsi = d_twoform(s.psi);
  CheckReport cp = sasakian_direct(s.plus, mu, dpsi, +1.0, cfg);
  CheckReport cm = sasakian_direct(s.minus, mu, dpsi, -1.0, cfg);
  return merge_reports("sasakian", {cp, cm});
}

MetricQuadruple sasakian_product_quadruple(const SasakiInput& s) {
  int m = s.dom.dim;
  int n = m + 1;
  MetricQuadruple q;
  q.dom = with_factors(s.dom, 1);
  ExprPtr et = exp_e(coord(n));

  q.gamma = MetricField{ezero_mat(n, n)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) q.gamma.c[i][j] = mul(et, s.plus.gamma.c[i][j]);
  q.gamma.c[n - 1][n - 1] = et;

  q.psi = TwoFormField{ezero_mat(n, n)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) q.psi.c[i][j] = mul(et, s.psi.c[i][j]);
  for (int i = 0; i < m; ++i) {
    q.psi.c[i][n - 1] = mul(et, s.kappa.c[i]);  // kappa ^ dt
    q.psi.c[n - 1][i] = neg(mul(et, s.kappa.c[i]));
  }

  auto lift_J = [&](const AlmostContactMetric& acm) {
    EndField J{ezero_mat(n, n)};
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) J.c[i][j] = acm.F.c[i][j];
    for (int i = 0; i < m; ++i) {
      J.c[i][n - 1] = acm.Z.c[i];
      J.c[n - 1][i] = neg(acm.xi.c[i]);
    }
    return J;
  };
  q.Fp = lift_J(s.plus);
  q.Fm = lift_J(s.minus);
  return q;
}

}  // namespace crf
