#include "crf/genmetric.hpp"

#include <Eigen/Eigenvalues>

namespace crf {

namespace {

constexpr int kProbePoints = 16;

Eigen::MatrixXd pairing_matrix(int m) {
  Eigen::MatrixXd g0 = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  g0.block(0, m, m, m) = 0.5 * Eigen::MatrixXd::Identity(m, m);
  g0.block(m, 0, m, m) = 0.5 * Eigen::MatrixXd::Identity(m, m);
  return g0;
}

double max_abs(const Eigen::MatrixXd& a) {
  return a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
}

double sup_norm(EvalContext& ctx, const BigField& f) {
  double r = 0;
  for (auto& e : f.X.c) r = std::max(r, std::abs(ctx.value(e)));
  for (auto& e : f.a.c) r = std::max(r, std::abs(ctx.value(e)));
  return r;
}

double min_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  return es.eigenvalues().minCoeff();
}

}  // namespace

GeneralizedMetric make_metric(MetricField gamma, TwoFormField psi, CoordinateDomain dom) {
  GeneralizedMetric g;
  g.gamma = std::move(gamma);
  g.psi = std::move(psi);
  g.dom = std::move(dom);
  int m = g.m();
  g.inv_gamma = einverse(g.gamma.c);
  g.phi = escale(lit(-1), emul(g.inv_gamma, flat_mat(g.psi)));
  g.flat_beta = emul(g.gamma.c, esub(eidentity(m), emul(g.phi, g.phi)));
  g.sharp_G = ezero_mat(2 * m, 2 * m);
  ExprMat tphi = etranspose(g.phi);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      g.sharp_G[i][j] = g.phi[i][j];
      g.sharp_G[i][m + j] = g.inv_gamma[i][j];
      g.sharp_G[m + i][j] = g.flat_beta[i][j];
      g.sharp_G[m + i][m + j] = tphi[i][j];
    }
  return g;
}

void validate_quadruple(const MetricQuadruple& q, double tol) {
  auto pts = sample_points(q.dom, kProbePoints, 42);
  for (const auto& p : pts) {
    for (const EndField* f : {&q.Fp, &q.Fm}) {
      Eigen::MatrixXd fv = eval_at(f->c, p);
      Eigen::MatrixXd gv = eval_at(q.gamma.c, p);
      double r = max_abs(fv * fv * fv + fv);
      if (r > tol) throw StructureError("quadruple: F^3 + F != 0", r);
      r = max_abs(fv.transpose() * gv + gv * fv);
      if (r > tol) throw StructureError("quadruple: F is not gamma-skew", r);
      if (min_eigenvalue(gv) < 1e-10)
        throw StructureError("quadruple: gamma is not positive definite", 0);
    }
  }
}

BigField sharp_G_apply(const GeneralizedMetric& G, const BigField& A) {
  return big_apply(G.sharp_G, A);
}

BigField v_pm_lift(const GeneralizedMetric& G, const VectorField& X, int sign) {
  int m = G.m();
  BigField out{X, OneFormField{ezero_vec(m)}};
  ExprMat fl = flat_mat(G.psi);
  for (int i = 0; i < m; ++i) {
    ExprPtr s = lit(0);
    for (int j = 0; j < m; ++j) {
      ExprPtr t = add(fl[i][j], mul(lit(sign > 0 ? 1.0 : -1.0), G.gamma.c[i][j]));
      s = add(s, mul(t, X.c[j]));
    }
    out.a.c[i] = s;
  }
  return out;
}

CheckReport check_metric_axioms(const GeneralizedMetric& G, const CheckConfig& cfg) {
  int m = G.m();
  Eigen::MatrixXd g0 = pairing_matrix(m);
  ExprMat sharp = G.sharp_G;
  ExprMat gamma = G.gamma.c;
  ExprMat beta = G.flat_beta;
  ExprMat psifl = flat_mat(G.psi);
  auto pts = sample_points(G.dom, cfg.samples, cfg.seed);
  PointResidual f = [=](EvalContext& ctx) {
    Eigen::MatrixXd S = ctx.value(sharp);
    Eigen::MatrixXd gm = ctx.value(gamma);
    Eigen::MatrixXd bm = ctx.value(beta);
    Eigen::MatrixXd pf = ctx.value(psifl);
    const auto n = S.rows();
    double r = max_abs(S * S - Eigen::MatrixXd::Identity(n, n));
    r = std::max(r, max_abs(S.transpose() * g0 * S - g0));
    // positivity margins enter as residuals when violated
    Eigen::MatrixXd Gm = 2.0 * S.transpose() * g0;
    r = std::max(r, max_abs(Gm - Gm.transpose()));
    double margin = 1e-10;
    r = std::max(r, std::max(0.0, margin - min_eigenvalue(gm)));
    r = std::max(r, std::max(0.0, margin - min_eigenvalue(Eigen::MatrixXd(
                                               0.5 * (bm + bm.transpose())))));
    r = std::max(r, std::max(0.0, margin - min_eigenvalue(Eigen::MatrixXd(
                                               0.5 * (Gm + Gm.transpose())))));
    // V+- lifts: eigensections, orthogonality, G = +-2g
    Eigen::MatrixXd vp(2 * m, m), vm(2 * m, m);
    vp.topRows(m) = Eigen::MatrixXd::Identity(m, m);
    vm.topRows(m) = Eigen::MatrixXd::Identity(m, m);
    vp.bottomRows(m) = pf + gm;
    vm.bottomRows(m) = pf - gm;
    r = std::max(r, max_abs(S * vp - vp));
    r = std::max(r, max_abs(S * vm + vm));
    r = std::max(r, max_abs(vp.transpose() * g0 * vm));
    r = std::max(r, max_abs(vp.transpose() * (Gm - 2 * g0) * vp));
    r = std::max(r, max_abs(vm.transpose() * (Gm + 2 * g0) * vm));
    return r;
  };
  return scan_points("metric-axioms", f, G.dom, pts, cfg);
}

CompatibilityReport check_compatibility(const GeneralizedMetric& G, const GeneralizedF& s,
                                        const CheckConfig& cfg) {
  int m = G.m();
  ExprMat phi_m = phi_matrix(s);
  ExprMat sharp = G.sharp_G;
  auto pts = sample_points(G.dom, cfg.samples, cfg.seed);

  PointResidual commut = [phi_m, sharp](EvalContext& ctx) {
    Eigen::MatrixXd P = ctx.value(phi_m);
    Eigen::MatrixXd S = ctx.value(sharp);
    return max_abs(S * P - P * S);
  };

  ExprMat gamma = G.gamma.c;
  ExprMat phi = G.phi;
  ExprMat A = s.A.c;
  ExprMat Pi = s.pi.c;  // pi^{ij}
  ExprMat sig = s.sigma.c;
  PointResidual classical = [=](EvalContext& ctx) {
    Eigen::MatrixXd gm = ctx.value(gamma);
    Eigen::MatrixXd ph = ctx.value(phi);
    Eigen::MatrixXd Am = ctx.value(A);
    Eigen::MatrixXd Pm = ctx.value(Pi);
    Eigen::MatrixXd sg = ctx.value(sig);
    Eigen::MatrixXd W = gm * Pm * gm;  // varpi(X,Y) = pi(flat X, flat Y)
    Eigen::MatrixXd h1 =
        Am.transpose() * gm + gm * Am - (ph.transpose() * W - W * ph);
    Eigen::MatrixXd ph2 = ph * ph;
    Eigen::MatrixXd h2 =
        sg - (W - ph2.transpose() * W + (Am * ph - ph * Am).transpose() * gm);
    return std::max(max_abs(h1), max_abs(h2));
  };

  CompatibilityReport rep;
  rep.commutation = scan_points("metric-compat", commut, G.dom, pts, cfg);
  rep.classical_form = scan_points("metric-compat-classical", classical, G.dom, pts, cfg);
  return rep;
}

std::pair<EndField, EndField> induced_F_pm(const GeneralizedMetric& G, const GeneralizedF& s) {
  int m = G.m();
  ExprMat sp = sharp_mat(s.pi);
  ExprMat psifl = flat_mat(G.psi);
  ExprMat fp = eadd(s.A.c, emul(sp, eadd(psifl, G.gamma.c)));
  ExprMat fm = eadd(s.A.c, emul(sp, esub(psifl, G.gamma.c)));
  for (const auto& p : sample_points(G.dom, kProbePoints, 42)) {
    for (const ExprMat* f : {&fp, &fm}) {
      Eigen::MatrixXd fv = eval_at(*f, p);
      double r = max_abs(fv * fv * fv + fv);
      if (r > 1e-8)
        throw StructureError("induced F fails the cubic identity (incompatible pair)", r);
    }
  }
  return {EndField{fp}, EndField{fm}};
}

GeneralizedF reconstruct_phi(const MetricQuadruple& q) {
  int m = q.m();
  GeneralizedMetric G = metric_of(q);
  ExprMat diff = esub(q.Fp.c, q.Fm.c);
  ExprMat sp = escale(lit(0.5), emul(diff, G.inv_gamma));
  ExprMat gpsi = emul(G.inv_gamma, flat_mat(q.psi));
  ExprMat A = escale(lit(0.5), eadd(emul(q.Fp.c, esub(eidentity(m), gpsi)),
                                    emul(q.Fm.c, eadd(eidentity(m), gpsi))));
  ExprMat fs = emul(q.gamma.c,
                    eadd(esub(emul(A, G.phi), emul(G.phi, A)), emul(sp, G.flat_beta)));
  GeneralizedF out = zero_structure(q.dom);
  out.A = EndField{A};
  out.pi = bivector_from_sharp(sp);
  out.sigma = twoform_from_flat(fs);
  return out;
}

GeneralizedMetric metric_of(const MetricQuadruple& q) {
  return make_metric(q.gamma, q.psi, q.dom);
}

GeneralizedF complementary_structure(const GeneralizedMetric& G, const GeneralizedF& s) {
  ExprMat comp = emul(G.sharp_G, phi_matrix(s));
  return structure_from_phi_matrix(comp, s.dom);
}

CheckReport check_quadruple_roundtrip(const MetricQuadruple& q, const CheckConfig& cfg) {
  GeneralizedMetric G = metric_of(q);
  GeneralizedF s = reconstruct_phi(q);
  auto [fp, fm] = induced_F_pm(G, s);
  ExprMat dp = esub(fp.c, q.Fp.c);
  ExprMat dm = esub(fm.c, q.Fm.c);
  auto pts = sample_points(q.dom, cfg.samples, cfg.seed);
  PointResidual f = [dp, dm](EvalContext& ctx) {
    return std::max(max_abs(ctx.value(dp)), max_abs(ctx.value(dm)));
  };
  return scan_points("quadruple-roundtrip", f, q.dom, pts, cfg);
}

CheckReport check_phi_roundtrip(const GeneralizedMetric& G, const GeneralizedF& s,
                                const CheckConfig& cfg) {
  auto [fp, fm] = induced_F_pm(G, s);
  MetricQuadruple q{G.gamma, G.psi, fp, fm, G.dom};
  GeneralizedF back = reconstruct_phi(q);
  ExprMat diff = esub(phi_matrix(back), phi_matrix(s));
  auto pts = sample_points(G.dom, cfg.samples, cfg.seed);
  PointResidual f = [diff](EvalContext& ctx) { return max_abs(ctx.value(diff)); };
  return scan_points("quadruple-roundtrip", f, G.dom, pts, cfg);
}

// --- CRFK: connection form ------------------------------------------------------

CheckReport check_crfk_nabla(const MetricQuadruple& q, const CheckConfig& cfg) {
  validate_quadruple(q);
  int m = q.m();
  Connection conn = levi_civita(q.gamma);
  std::vector<ExprMat> nfp = covariant_derivative_end(conn, q.Fp);
  std::vector<ExprMat> nfm = covariant_derivative_end(conn, q.Fm);
  ThreeFormField dpsi = d_twoform(q.psi);
  auto pts = sample_points(q.dom, cfg.samples, cfg.seed);

  ExprMat fp = q.Fp.c, fm = q.Fm.c, gamma = q.gamma.c;
  PointResidual f = [=](EvalContext& ctx) {
    Eigen::MatrixXd gm = ctx.value(gamma);
    double r = 0;
    for (int sign = 0; sign < 2; ++sign) {
      const ExprMat& F = sign == 0 ? fp : fm;
      const std::vector<ExprMat>& NF = sign == 0 ? nfp : nfm;
      double sg = sign == 0 ? 1.0 : -1.0;
      Eigen::MatrixXd Fv = ctx.value(F);
      Eigen::MatrixXd F2 = Fv * Fv;
      std::vector<Eigen::MatrixXd> NFv;
      NFv.reserve(m);
      for (int k = 0; k < m; ++k) NFv.push_back(ctx.value(NF[k]));
      // dpsi values
      std::vector<double> D(static_cast<std::size_t>(m) * m * m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            D[static_cast<std::size_t>((i * m + j) * m + k)] = ctx.value(dpsi.c[i][j][k]);
      auto dv = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v, int c) {
        double s = 0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            s += u(i) * v(j) * D[static_cast<std::size_t>((i * m + j) * m + c)];
        return s;
      };
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c) {
            double lhs = Fv.col(a).dot(gm * NFv[c].col(b));
            Eigen::VectorXd eb = Eigen::VectorXd::Zero(m);
            eb(b) = 1;
            double rhs = sg * 0.5 * (dv(F2.col(a), eb, c) + dv(Fv.col(a), Fv.col(b), c));
            r = std::max(r, std::abs(lhs - rhs));
          }
    }
    return r;
  };
  CheckReport cond = scan_points("crfk-nabla-condition", f, q.dom, pts, cfg);
  CheckReport cp = check_classical_crf(q.Fp, q.dom, cfg);
  CheckReport cm = check_classical_crf(q.Fm, q.dom, cfg);
  return merge_reports("crfk-nabla", {cond, cp, cm});
}

// --- CRFK: Lie form --------------------------------------------------------------

namespace {

OneFormField interior_cov2(const VectorField& x, const ExprMat& t) {
  int m = x.dim();
  OneFormField out{ezero_vec(m)};
  for (int c = 0; c < m; ++c) {
    ExprPtr s = lit(0);
    for (int i = 0; i < m; ++i) s = add(s, mul(x.c[i], t[i][c]));
    out.c[c] = s;
  }
  return out;
}

// i(X ^ Y) dpsi - sign * (i(X) L_Y gamma - L_X i(Y) gamma), real arguments
OneFormField crfk4_residual(const VectorField& X, const VectorField& Y,
                            const ThreeFormField& dpsi, const MetricField& gamma, double sign) {
  int m = X.dim();
  OneFormField out{ezero_vec(m)};
  OneFormField lhs = interior_two(Y, interior_three(X, dpsi));  // dpsi(X,Y,.)
  OneFormField t1 = interior_cov2(X, lie_cov2(Y, gamma.c));
  OneFormField t2 = lie_oneform(X, interior_cov2(Y, gamma.c));
  for (int c = 0; c < m; ++c)
    out.c[c] = sub(lhs.c[c], mul(lit(sign), sub(t1.c[c], t2.c[c])));
  return out;
}

struct CVecField {
  VectorField re, im;
};

// bilinear complex expansion of crfk4_residual
std::pair<OneFormField, OneFormField> crfk4_residual_c(const CVecField& X, const CVecField& Y,
                                                       const ThreeFormField& dpsi,
                                                       const MetricField& gamma, double sign) {
  OneFormField rr = crfk4_residual(X.re, Y.re, dpsi, gamma, sign);
  OneFormField ii = crfk4_residual(X.im, Y.im, dpsi, gamma, sign);
  OneFormField ri = crfk4_residual(X.re, Y.im, dpsi, gamma, sign);
  OneFormField ir = crfk4_residual(X.im, Y.re, dpsi, gamma, sign);
  int m = X.re.dim();
  OneFormField re{ezero_vec(m)}, im{ezero_vec(m)};
  for (int c = 0; c < m; ++c) {
    re.c[c] = sub(rr.c[c], ii.c[c]);
    im.c[c] = add(ri.c[c], ir.c[c]);
  }
  return {re, im};
}

}  // namespace

CheckReport check_crfk_lie(const MetricQuadruple& q, const CheckConfig& cfg) {
  validate_quadruple(q);
  int m = q.m();
  ThreeFormField dpsi = d_twoform(q.psi);
  auto pts = sample_points(q.dom, cfg.samples, cfg.seed);

  struct Item {
    OneFormField re, im;
    VectorField a_re, a_im, b_re, b_im;  // for scale normalization
  };
  std::vector<Item> items;

  for (int sign = 0; sign < 2; ++sign) {
    const EndField& F = sign == 0 ? q.Fp : q.Fm;
    double sg = sign == 0 ? 1.0 : -1.0;
    ExprMat F2 = emul(F.c, F.c);
    ExprMat h_re = escale(lit(-0.5), F2);  // pr_H = -(F^2 + iF)/2
    ExprMat h_im = escale(lit(-0.5), F.c);
    ExprMat qproj = eadd(eidentity(m), F2);  // pr_Q = Id + F^2

    auto col = [m](const ExprMat& M, int j) {
      VectorField v{ezero_vec(m)};
      for (int i = 0; i < m; ++i) v.c[i] = M[i][j];
      return v;
    };

    std::vector<CVecField> H, Q;
    for (int j = 0; j < m; ++j) {
      H.push_back({col(h_re, j), col(h_im, j)});
      Q.push_back({col(qproj, j), VectorField{ezero_vec(m)}});
    }

    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        auto [re, im] = crfk4_residual_c(H[a], H[b], dpsi, q.gamma, sg);
        items.push_back({re, im, H[a].re, H[a].im, H[b].re, H[b].im});
      }
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        auto [re, im] = crfk4_residual_c(H[a], Q[b], dpsi, q.gamma, sg);
        items.push_back({re, im, H[a].re, H[a].im, Q[b].re, Q[b].im});
      }
  }

  PointResidual f = [items](EvalContext& ctx) {
    double r = 0;
    for (const auto& it : items) {
      double na = 0, nb = 0, rr = 0;
      for (auto& e : it.a_re.c) na = std::max(na, std::abs(ctx.value(e)));
      for (auto& e : it.a_im.c) na = std::max(na, std::abs(ctx.value(e)));
      for (auto& e : it.b_re.c) nb = std::max(nb, std::abs(ctx.value(e)));
      for (auto& e : it.b_im.c) nb = std::max(nb, std::abs(ctx.value(e)));
      for (auto& e : it.re.c) rr = std::max(rr, std::abs(ctx.value(e)));
      for (auto& e : it.im.c) rr = std::max(rr, std::abs(ctx.value(e)));
      r = std::max(r, rr / scale_factor(na, nb));
    }
    return r;
  };
  CheckReport cond = scan_points("crfk-lie-condition", f, q.dom, pts, cfg);
  CheckReport cp = check_classical_crf(q.Fp, q.dom, cfg);
  CheckReport cm = check_classical_crf(q.Fm, q.dom, cfg);
  return merge_reports("crfk-lie", {cond, cp, cm});
}

// --- CRFK: bracket closure -------------------------------------------------------

namespace {

CheckReport closure_impl(const GeneralizedMetric& G, const GeneralizedF& s,
                         const CheckConfig& cfg, bool crfk1_conditions, bool spsm_condition,
                         const std::string& name) {
  int m = G.m();
  ExprMat phi = phi_matrix(s);
  ExprMat phi2 = emul(phi, phi);
  ExprMat id2m = eidentity(2 * m);
  ExprMat pr_p = escale(lit(0.5), eadd(id2m, G.sharp_G));
  ExprMat pr_m = escale(lit(0.5), esub(id2m, G.sharp_G));
  ExprMat prE_re = escale(lit(-0.5), phi2);
  ExprMat prE_im = escale(lit(-0.5), phi);
  ExprMat prS = eadd(id2m, phi2);

  auto columns_c = [m](const ExprMat& re, const ExprMat& im) {
    std::vector<CBigField> out;
    for (int j = 0; j < 2 * m; ++j) {
      BigField r = big_zero(m), i = big_zero(m);
      for (int k = 0; k < m; ++k) {
        r.X.c[k] = re[k][j];
        r.a.c[k] = re[m + k][j];
        i.X.c[k] = im[k][j];
        i.a.c[k] = im[m + k][j];
      }
      out.push_back({r, i});
    }
    return out;
  };
  auto columns_r = [m](const ExprMat& M) {
    std::vector<BigField> out;
    for (int j = 0; j < 2 * m; ++j) {
      BigField r = big_zero(m);
      for (int k = 0; k < m; ++k) {
        r.X.c[k] = M[k][j];
        r.a.c[k] = M[m + k][j];
      }
      out.push_back(r);
    }
    return out;
  };

  ExprMat prEp_re = emul(prE_re, pr_p), prEp_im = emul(prE_im, pr_p);
  ExprMat prEm_re = emul(prE_re, pr_m), prEm_im = emul(prE_im, pr_m);
  ExprMat prSp = emul(prS, pr_p), prSm = emul(prS, pr_m);

  auto Ep = columns_c(prEp_re, prEp_im);
  auto Em = columns_c(prEm_re, prEm_im);
  auto Sp = columns_r(prSp);
  auto Sm = columns_r(prSm);

  // per-point complement projectors are evaluated from these matrices
  struct CItem {
    CBigField bracket;
    CBigField a;
    BigField b_r;  // when the second argument is real
    bool b_real;
    int kind;  // 0: E+E+, 1: E+S+, 2: E-E-, 3: E-S-, 4: S+S-
  };
  std::vector<CItem> items;
  if (crfk1_conditions) {
    for (int i = 0; i < 2 * m; ++i)
      for (int j = i + 1; j < 2 * m; ++j) {
        items.push_back({courant_bracket(Ep[i], Ep[j]), Ep[i], Ep[j].re, false, 0});
        items.push_back({courant_bracket(Em[i], Em[j]), Em[i], Em[j].re, false, 2});
      }
    for (int i = 0; i < 2 * m; ++i)
      for (int j = 0; j < 2 * m; ++j) {
        items.push_back(
            {courant_bracket(Ep[i], complexify(Sp[j])), Ep[i], Sp[j], true, 1});
        items.push_back(
            {courant_bracket(Em[i], complexify(Sm[j])), Em[i], Sm[j], true, 3});
      }
  }
  if (spsm_condition)
    for (int i = 0; i < 2 * m; ++i)
      for (int j = 0; j < 2 * m; ++j)
        items.push_back({courant_bracket(complexify(Sp[i]), complexify(Sm[j])),
                         complexify(Sp[i]), Sm[j], true, 4});

  auto pts = sample_points(G.dom, cfg.samples, cfg.seed);
  ExprMat sharp = G.sharp_G;
  PointResidual f = [=](EvalContext& ctx) {
    int n = 2 * m;
    Eigen::MatrixXd P = ctx.value(phi);
    Eigen::MatrixXd S = ctx.value(sharp);
    Eigen::MatrixXd P2 = P * P;
    Eigen::MatrixXcd cP = P.cast<std::complex<double>>();
    Eigen::MatrixXcd cP2 = P2.cast<std::complex<double>>();
    const std::complex<double> I(0, 1);
    Eigen::MatrixXcd prE = -0.5 * (cP2 + I * cP);
    Eigen::MatrixXcd prSv = Eigen::MatrixXcd::Identity(n, n) + cP2;
    Eigen::MatrixXcd prp = 0.5 * (Eigen::MatrixXcd::Identity(n, n) + S.cast<std::complex<double>>());
    Eigen::MatrixXcd prm = Eigen::MatrixXcd::Identity(n, n) - prp;
    Eigen::MatrixXcd comp[5];
    comp[0] = Eigen::MatrixXcd::Identity(n, n) - prE * prp;
    comp[1] = Eigen::MatrixXcd::Identity(n, n) - prE * prp - prSv * prp;
    comp[2] = Eigen::MatrixXcd::Identity(n, n) - prE * prm;
    comp[3] = Eigen::MatrixXcd::Identity(n, n) - prE * prm - prSv * prm;
    comp[4] = Eigen::MatrixXcd::Identity(n, n) - prSv;

    auto value_c = [&](const CBigField& v) {
      Eigen::VectorXcd out(n);
      ExprVec re = big_components(v.re), im = big_components(v.im);
      for (int k = 0; k < n; ++k)
        out(k) = std::complex<double>(ctx.value(re[k]), ctx.value(im[k]));
      return out;
    };

    double r = 0;
    for (const auto& it : items) {
      Eigen::VectorXcd br = value_c(it.bracket);
      Eigen::VectorXcd res = comp[it.kind] * br;
      double na = value_c(it.a).cwiseAbs().maxCoeff();
      double nb;
      if (it.b_real) {
        EvalContext& c2 = ctx;
        double nn = 0;
        for (auto& e : big_components(it.b_r)) nn = std::max(nn, std::abs(c2.value(e)));
        nb = nn;
      } else {
        nb = na;  // both complex columns have comparable scale
      }
      r = std::max(r, res.cwiseAbs().maxCoeff() / scale_factor(na, nb));
    }
    return r;
  };
  return scan_points(name, f, G.dom, pts, cfg);
}

}  // namespace

CheckReport check_bracket_closure(const GeneralizedMetric& G, const GeneralizedF& s,
                                  const CheckConfig& cfg) {
  return closure_impl(G, s, cfg, true, true, "crfk-closure");
}

CheckReport check_spsm(const GeneralizedMetric& G, const GeneralizedF& s,
                       const CheckConfig& cfg) {
  return closure_impl(G, s, cfg, false, true, "spsm");
}

// --- Gualtieri specialization ----------------------------------------------------

CheckReport check_gualtieri_kahler(const MetricQuadruple& q, const CheckConfig& cfg) {
  validate_quadruple(q);
  int m = q.m();
  for (const auto& p : sample_points(q.dom, kProbePoints, 42)) {
    for (const EndField* f : {&q.Fp, &q.Fm}) {
      Eigen::MatrixXd fv = eval_at(f->c, p);
      double r = max_abs(fv * fv + Eigen::MatrixXd::Identity(m, m));
      if (r > 1e-8)
        throw StructureError("gualtieri check requires S = 0 (F^2 = -Id)", r);
    }
  }
  ThreeFormField dpsi = d_twoform(q.psi);
  // omega_{+-}(X,Y) = gamma(J X, Y) => stored matrix J^T gamma
  TwoFormField omp{emul(etranspose(q.Fp.c), q.gamma.c)};
  TwoFormField omm{emul(etranspose(q.Fm.c), q.gamma.c)};
  ThreeFormField dop = d_twoform(omp);
  ThreeFormField dom_ = d_twoform(omm);
  auto pts = sample_points(q.dom, cfg.samples, cfg.seed);
  ExprMat fp = q.Fp.c, fm = q.Fm.c;

  PointResidual f = [=](EvalContext& ctx) {
    double r = 0;
    for (int sign = 0; sign < 2; ++sign) {
      const ExprMat& F = sign == 0 ? fp : fm;
      const ThreeFormField& dom3 = sign == 0 ? dop : dom_;
      double sg = sign == 0 ? 1.0 : -1.0;
      Eigen::MatrixXd Fv = ctx.value(F);
      std::vector<double> D(static_cast<std::size_t>(m) * m * m),
          W(static_cast<std::size_t>(m) * m * m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) {
            D[static_cast<std::size_t>((i * m + j) * m + k)] = ctx.value(dpsi.c[i][j][k]);
            W[static_cast<std::size_t>((i * m + j) * m + k)] = ctx.value(dom3.c[i][j][k]);
          }
      auto w3 = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                    const Eigen::VectorXd& w) {
        double sum = 0;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
              sum += u(i) * v(j) * w(k) * W[static_cast<std::size_t>((i * m + j) * m + k)];
        return sum;
      };
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
          for (int c = b + 1; c < m; ++c) {
            double lhs = D[static_cast<std::size_t>((a * m + b) * m + c)];
            double rhs = sg * w3(Fv.col(a), Fv.col(b), Fv.col(c));
            r = std::max(r, std::abs(lhs - rhs));
          }
    }
    return r;
  };
  return scan_points("gualtieri", f, q.dom, pts, cfg);
}

// --- partial Kaehler -------------------------------------------------------------

CheckReport check_partial_kahler(const MetricQuadruple& q, const CheckConfig& cfg) {
  validate_quadruple(q);
  int m = q.m();
  ThreeFormField dpsi = d_twoform(q.psi);
  for (const auto& p : sample_points(q.dom, kProbePoints, 42)) {
    double r = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) r = std::max(r, std::abs(eval(dpsi.c[i][j][k], p)));
    if (r > 1e-9) throw StructureError("partial-kahler check requires dpsi = 0", r);
  }
  Connection conn = levi_civita(q.gamma);
  std::vector<ExprMat> nfp = covariant_derivative_end(conn, q.Fp);
  std::vector<ExprMat> nfm = covariant_derivative_end(conn, q.Fm);
  // parallelism of Q: nabla_{e_c}(pr_Q e_b) must stay inside Q
  auto q_derivatives = [&](const EndField& F) {
    ExprMat qp = eadd(eidentity(m), emul(F.c, F.c));
    std::vector<ExprMat> out(m, ezero_mat(m, m));  // out[c][i][b]
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < m; ++i)
        for (int b = 0; b < m; ++b) {
          ExprPtr s = partial(qp[i][b], c + 1);
          for (int l = 0; l < m; ++l) s = add(s, mul(conn.christoffel[i][c][l], qp[l][b]));
          out[c][i][b] = s;
        }
    return std::make_pair(qp, out);
  };
  auto qp_pair = q_derivatives(q.Fp);
  auto qm_pair = q_derivatives(q.Fm);
  ExprMat qpp = qp_pair.first, qpm = qm_pair.first;
  std::vector<ExprMat> dqp = qp_pair.second, dqm = qm_pair.second;

  auto pts = sample_points(q.dom, cfg.samples, cfg.seed);
  ExprMat fp = q.Fp.c, fm = q.Fm.c, gamma = q.gamma.c;
  PointResidual f = [=](EvalContext& ctx) {
    double r = 0;
    Eigen::MatrixXd gm = ctx.value(gamma);
    for (int sign = 0; sign < 2; ++sign) {
      const ExprMat& F = sign == 0 ? fp : fm;
      const std::vector<ExprMat>& NF = sign == 0 ? nfp : nfm;
      const ExprMat& QP = sign == 0 ? qpp : qpm;
      const std::vector<ExprMat>& DQ = sign == 0 ? dqp : dqm;
      Eigen::MatrixXd Fv = ctx.value(F);
      Eigen::MatrixXd Qv = ctx.value(QP);
      for (int c = 0; c < m; ++c) {
        Eigen::MatrixXd NFv = ctx.value(NF[c]);
        // gamma(F e_a, (nabla_{e_c} F) e_b) = 0
        Eigen::MatrixXd lhs = Fv.transpose() * gm * NFv;
        r = std::max(r, max_abs(lhs));
        // (Id - pr_Q) nabla_{e_c}(pr_Q e_b) = 0
        Eigen::MatrixXd dq = ctx.value(DQ[c]);
        r = std::max(r, max_abs((Eigen::MatrixXd::Identity(m, m) - Qv) * dq));
      }
    }
    return r;
  };
  return scan_points("partial-kahler", f, q.dom, pts, cfg);
}

}  // namespace crf
