#include "crf/genstruct.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace crf {

namespace {

constexpr int kProbePoints = 16;

std::vector<Point> probe_points(const CoordinateDomain& dom) {
  return sample_points(dom, kProbePoints, 42);
}

// pairing matrix: g(u, v) = u^T G0 v on component columns
Eigen::MatrixXd pairing_matrix(int m) {
  Eigen::MatrixXd g0 = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  g0.block(0, m, m, m) = 0.5 * Eigen::MatrixXd::Identity(m, m);
  g0.block(m, 0, m, m) = 0.5 * Eigen::MatrixXd::Identity(m, m);
  return g0;
}

double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }
double max_abs(const Eigen::MatrixXcd& a) { return a.cwiseAbs().maxCoeff(); }

double sup_norm(EvalContext& ctx, const BigField& f) {
  double r = 0;
  for (auto& e : f.X.c) r = std::max(r, std::abs(ctx.value(e)));
  for (auto& e : f.a.c) r = std::max(r, std::abs(ctx.value(e)));
  return r;
}

}  // namespace

GeneralizedF zero_structure(const CoordinateDomain& dom) {
  int m = dom.dim;
  return {EndField{ezero_mat(m, m)}, BivectorField{ezero_mat(m, m)},
          TwoFormField{ezero_mat(m, m)}, dom};
}

ExprMat phi_matrix(const GeneralizedF& s) {
  int m = s.m();
  ExprMat out = ezero_mat(2 * m, 2 * m);
  ExprMat sp = sharp_mat(s.pi);
  ExprMat fl = flat_mat(s.sigma);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      out[i][j] = s.A.c[i][j];
      out[i][m + j] = sp[i][j];
      out[m + i][j] = fl[i][j];
      out[m + i][m + j] = neg(s.A.c[j][i]);
    }
  return out;
}

ExprMat phi_squared(const GeneralizedF& s) {
  ExprMat p = phi_matrix(s);
  return emul(p, p);
}

GeneralizedF structure_from_phi_matrix(const ExprMat& phi, const CoordinateDomain& dom) {
  int m = static_cast<int>(phi.size()) / 2;
  GeneralizedF out = zero_structure(dom);
  ExprMat sp = ezero_mat(m, m), fl = ezero_mat(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      out.A.c[i][j] = phi[i][j];
      sp[i][j] = phi[i][m + j];
      fl[i][j] = phi[m + i][j];
    }
  out.pi = bivector_from_sharp(sp);
  out.sigma = twoform_from_flat(fl);
  return out;
}

BigField apply_phi(const GeneralizedF& s, const BigField& A) {
  return big_apply(phi_matrix(s), A);
}

CBigField apply_phi(const GeneralizedF& s, const CBigField& A) {
  return {apply_phi(s, A.re), apply_phi(s, A.im)};
}

// --- eigenstructure -----------------------------------------------------------

EigenData eigen_data(const GeneralizedF& s, const Point& p, double rank_tol) {
  int m = s.m();
  Eigen::MatrixXd phi = eval_at(phi_matrix(s), p);
  Eigen::MatrixXd phi2 = phi * phi;
  Eigen::MatrixXcd cphi = phi.cast<std::complex<double>>();
  Eigen::MatrixXcd cphi2 = phi2.cast<std::complex<double>>();
  const std::complex<double> I(0, 1);

  EigenData d;
  d.pr_E = -0.5 * (cphi2 + I * cphi);
  d.pr_Ebar = -0.5 * (cphi2 - I * cphi);
  d.pr_S = Eigen::MatrixXd::Identity(2 * m, 2 * m) + phi2;
  d.pr_L = -phi2;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd_e(d.pr_E);
  double smax = svd_e.singularValues().size() ? svd_e.singularValues()(0) : 0.0;
  int k = 0;
  for (int i = 0; i < svd_e.singularValues().size(); ++i)
    if (svd_e.singularValues()(i) > rank_tol * std::max(smax, 1.0)) ++k;
  d.rank_E = k;
  d.dim_S = 2 * (m - k);

  // orthonormal basis of S from a rank-revealing QR of pr_S; the rank cutoff
  // is floored at scale 1 because nonzero singular values of a projector are
  // never below 1
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.pr_S);
  int r = 0;
  {
    Eigen::VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
    double cutoff = rank_tol * std::max(qr.maxPivot(), 1.0);
    for (int i = 0; i < diag.size(); ++i)
      if (diag(i) > cutoff) ++r;
  }
  int qneg = 0;
  if (r > 0) {
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(2 * m, r);
    Eigen::MatrixXd gram = q.transpose() * pairing_matrix(m) * q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    double emax = es.eigenvalues().cwiseAbs().maxCoeff();
    for (int i = 0; i < r; ++i)
      if (es.eigenvalues()(i) < -rank_tol * std::max(emax, 1.0)) ++qneg;
  }
  d.neg_index = qneg;
  return d;
}

double projector_residual(const Eigen::MatrixXd& phi) {
  const auto n = phi.rows();
  Eigen::MatrixXd phi2 = phi * phi;
  Eigen::MatrixXcd cphi = phi.cast<std::complex<double>>();
  Eigen::MatrixXcd cphi2 = phi2.cast<std::complex<double>>();
  const std::complex<double> I(0, 1);
  Eigen::MatrixXcd pe = -0.5 * (cphi2 + I * cphi);
  Eigen::MatrixXcd peb = -0.5 * (cphi2 - I * cphi);
  Eigen::MatrixXcd ps = Eigen::MatrixXcd::Identity(n, n) + cphi2;
  double r = 0;
  r = std::max(r, max_abs(Eigen::MatrixXcd(pe * pe - pe)));
  r = std::max(r, max_abs(Eigen::MatrixXcd(peb * peb - peb)));
  r = std::max(r, max_abs(Eigen::MatrixXcd(ps * ps - ps)));
  r = std::max(r, max_abs(Eigen::MatrixXcd(pe * ps)));
  r = std::max(r, max_abs(Eigen::MatrixXcd(pe + peb + ps - Eigen::MatrixXcd::Identity(n, n))));
  // pr_L = -Phi^2 is definitional; the multiplication-by-i relation is not
  r = std::max(r, max_abs(Eigen::MatrixXcd(cphi * pe - I * pe)));
  return r;
}

EigenSummary eigen_constancy(const GeneralizedF& s, const std::vector<Point>& pts,
                             double rank_tol) {
  EigenSummary first{};
  bool have = false;
  for (const auto& p : pts) {
    EigenData d = eigen_data(s, p, rank_tol);
    EigenSummary cur{d.rank_E, d.dim_S, d.neg_index};
    if (!have) {
      first = cur;
      have = true;
    } else if (cur.rank_E != first.rank_E || cur.dim_S != first.dim_S ||
               cur.neg_index != first.neg_index) {
      throw StructureError("rank or negative index fluctuates across sample points", 1.0);
    }
  }
  return first;
}

// --- torsions -----------------------------------------------------------------

BigField nijenhuis_torsion(const GeneralizedF& s, const BigField& A, const BigField& B) {
  ExprMat phi = phi_matrix(s);
  ExprMat phi2 = emul(phi, phi);
  BigField pa = big_apply(phi, A), pb = big_apply(phi, B);
  BigField t = courant_bracket(pa, pb);
  t = big_sub(t, big_apply(phi, courant_bracket(pa, B)));
  t = big_sub(t, big_apply(phi, courant_bracket(A, pb)));
  t = big_add(t, big_apply(phi2, courant_bracket(A, B)));
  return t;
}

BigField s_concomitant(const GeneralizedF& s, const BigField& A, const BigField& B) {
  ExprMat phi = phi_matrix(s);
  ExprMat phi2 = emul(phi, phi);
  BigField pa = big_apply(phi, A), pb = big_apply(phi, B);
  BigField p2a = big_apply(phi2, A), p2b = big_apply(phi2, B);
  BigField t = courant_bracket(pa, pb);
  t = big_sub(t, courant_bracket(p2a, p2b));
  t = big_add(t, big_apply(phi, courant_bracket(pa, p2b)));
  t = big_add(t, big_apply(phi, courant_bracket(p2a, pb)));
  return t;
}

// --- checks --------------------------------------------------------------------

CheckReport check_axioms(const GeneralizedF& s, const CheckConfig& cfg) {
  int m = s.m();
  ExprMat phi = phi_matrix(s);
  Eigen::MatrixXd g0 = pairing_matrix(m);
  auto pts = sample_points(s.dom, cfg.samples, cfg.seed);
  PointResidual f = [phi, g0](EvalContext& ctx) {
    Eigen::MatrixXd p = ctx.value(phi);
    double r = max_abs(Eigen::MatrixXd(p * p * p + p));
    r = std::max(r, max_abs(Eigen::MatrixXd(p.transpose() * g0 + g0 * p)));
    return r;
  };
  return scan_points("axioms", f, s.dom, pts, cfg);
}

CheckReport check_integrability(const GeneralizedF& s, const CheckConfig& cfg) {
  int m = s.m();
  std::vector<BigField> fields;
  for (int i = 0; i < 2 * m; ++i)
    for (int j = i + 1; j < 2 * m; ++j)
      fields.push_back(s_concomitant(s, big_basis(m, i), big_basis(m, j)));
  auto pts = sample_points(s.dom, cfg.samples, cfg.seed);
  PointResidual f = [fields](EvalContext& ctx) {
    double r = 0;
    for (const auto& fld : fields) r = std::max(r, sup_norm(ctx, fld));
    return r;
  };
  return scan_points("integrability", f, s.dom, pts, cfg);
}

CheckReport check_ls_torsion(const GeneralizedF& s, const CheckConfig& cfg) {
  int m = s.m();
  ExprMat phi2 = phi_squared(s);
  ExprMat prL = escale(lit(-1), phi2);
  ExprMat prS = eadd(eidentity(2 * m), phi2);
  std::vector<BigField> args_l, args_s;
  for (int i = 0; i < 2 * m; ++i) {
    args_l.push_back(big_apply(prL, big_basis(m, i)));
    args_s.push_back(big_apply(prS, big_basis(m, i)));
  }
  struct Item {
    BigField n, a, b;
  };
  std::vector<Item> items;
  for (int i = 0; i < 2 * m; ++i)
    for (int j = 0; j < 2 * m; ++j)
      items.push_back({nijenhuis_torsion(s, args_l[i], args_s[j]), args_l[i], args_s[j]});
  auto pts = sample_points(s.dom, cfg.samples, cfg.seed);
  PointResidual f = [items](EvalContext& ctx) {
    double r = 0;
    for (const auto& it : items) {
      double denom = scale_factor(sup_norm(ctx, it.a), sup_norm(ctx, it.b));
      r = std::max(r, sup_norm(ctx, it.n) / denom);
    }
    return r;
  };
  return scan_points("ls-torsion", f, s.dom, pts, cfg);
}

// --- classical -----------------------------------------------------------------

GeneralizedF from_classical_F(const EndField& F, const CoordinateDomain& dom) {
  int m = F.dim();
  for (const auto& p : probe_points(dom)) {
    Eigen::MatrixXd f = eval_at(F.c, p);
    double r = max_abs(Eigen::MatrixXd(f * f * f + f));
    if (r > 1e-8) throw StructureError("F^3 + F != 0 for classical input", r);
  }
  GeneralizedF out = zero_structure(dom);
  out.A = F;
  return out;
}

CheckReport check_classical_crf(const EndField& F, const CoordinateDomain& dom,
                                const CheckConfig& cfg) {
  int m = F.dim();
  EndField F2{emul(F.c, F.c)};
  auto fvec = [&](const ExprMat& M, int j) {
    VectorField v{ezero_vec(m)};
    for (int i = 0; i < m; ++i) v.c[i] = M[i][j];
    return v;
  };
  auto apply_end = [&](const ExprMat& M, const VectorField& v) {
    return VectorField{eapply(M, v.c)};
  };
  std::vector<VectorField> residuals;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      VectorField X = basis_vector(m, a), Y = basis_vector(m, b);
      VectorField FX = fvec(F.c, a), FY = fvec(F.c, b);
      VectorField F2X = fvec(F2.c, a), F2Y = fvec(F2.c, b);
      // N_F(X,Y) with Lie brackets
      ExprVec nf = lie_bracket(FX, FY).c;
      nf = evec_sub(nf, apply_end(F.c, lie_bracket(FX, Y)).c);
      nf = evec_sub(nf, apply_end(F.c, lie_bracket(X, FY)).c);
      nf = evec_add(nf, apply_end(F2.c, lie_bracket(X, Y)).c);
      // right-hand side of the single condition
      ExprVec rhs = lie_bracket(F2X, F2Y).c;
      ExprVec sum12 = evec_add(lie_bracket(X, FY).c, lie_bracket(F2X, FY).c);
      rhs = evec_sub(rhs, apply_end(F.c, VectorField{sum12}).c);
      ExprVec sum345 = evec_add(evec_add(lie_bracket(F2X, Y).c, lie_bracket(F2X, F2Y).c),
                                lie_bracket(X, Y).c);
      rhs = evec_add(rhs, apply_end(F2.c, VectorField{sum345}).c);
      residuals.push_back(VectorField{evec_sub(nf, rhs)});
    }
  auto pts = sample_points(dom, cfg.samples, cfg.seed);
  PointResidual f = [residuals](EvalContext& ctx) {
    double r = 0;
    for (const auto& v : residuals)
      for (const auto& e : v.c) r = std::max(r, std::abs(ctx.value(e)));
    return r;
  };
  return scan_points("classical-crf", f, dom, pts, cfg);
}

// --- skew-classical -------------------------------------------------------------

namespace {

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double tol = 1e-10) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(tol);
  if (lu.dimensionOfKernel() == 0) return Eigen::MatrixXd(a.cols(), 0);
  return lu.kernel();
}

Eigen::MatrixXd hcat(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows(), a.cols() + b.cols());
  if (a.cols()) out.leftCols(a.cols()) = a;
  if (b.cols()) out.rightCols(b.cols()) = b;
  return out;
}

Eigen::MatrixXd const_mat(const ExprMat& a, const CoordinateDomain& dom) {
  if (!mat_is_constant(a))
    throw StructureError(
        "non-constant (V, sigma) input: build the graph data and use graph_structures", 0);
  Point origin(dom.dim, 0.0);
  return eval_at(a, origin);
}

ExprMat lift_values(const Eigen::MatrixXd& v) {
  ExprMat out = ezero_mat(static_cast<int>(v.rows()), static_cast<int>(v.cols()));
  for (int i = 0; i < v.rows(); ++i)
    for (int j = 0; j < v.cols(); ++j) out[i][j] = lit(v(i, j));
  return out;
}

}  // namespace

GeneralizedF from_V_sigma(const std::vector<VectorField>& V, const TwoFormField& sigma,
                          const CoordinateDomain& dom) {
  int m = dom.dim;
  int r = static_cast<int>(V.size());
  ExprMat vcols = ezero_mat(m, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < m; ++i) vcols[i][j] = V[j].c[i];
  Eigen::MatrixXd Vm = const_mat(vcols, dom);
  Eigen::MatrixXd th = const_mat(sigma.c, dom);

  Eigen::MatrixXd restricted = Vm.transpose() * th * Vm;  // sigma on V
  if (std::abs(restricted.determinant()) < 1e-12)
    throw StructureError("sigma restricted to V is degenerate", 0);

  // V^{perp sigma} = ker(V^T sigma . )
  Eigen::MatrixXd W = null_space(Eigen::MatrixXd(Vm.transpose() * th));
  if (W.cols() != m - r) throw StructureError("V (+) V^perp does not span TM", 0);
  Eigen::MatrixXd VW = hcat(Vm, W);
  Eigen::FullPivLU<Eigen::MatrixXd> dec(VW);
  if (!dec.isInvertible()) throw StructureError("V (+) V^perp does not span TM", 0);

  // projector onto V along W
  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(m, m);
  sel.topLeftCorner(r, r) = Eigen::MatrixXd::Identity(r, r);
  Eigen::MatrixXd prV = VW * sel * dec.inverse();

  // ann V^perp has basis flat_sigma(v_i); complement ann V = ker(V^T)
  Eigen::MatrixXd B = th.transpose() * Vm;  // columns: components of i(v_i) sigma
  Eigen::MatrixXd Aann = null_space(Eigen::MatrixXd(Vm.transpose()));
  Eigen::MatrixXd BA = hcat(B, Aann);
  Eigen::FullPivLU<Eigen::MatrixXd> band(BA);
  if (!band.isInvertible()) throw StructureError("annihilator decomposition failed", 0);

  // sharp_pi dx^j = -V c_j where [c; d] = (B|A)^{-1} e_j
  Eigen::MatrixXd coeff = band.inverse();
  Eigen::MatrixXd sharp = -Vm * coeff.topRows(r);

  // sigma' (X,Y) = sigma(prV X, prV Y)
  Eigen::MatrixXd sig = prV.transpose() * th * prV;

  GeneralizedF out = zero_structure(dom);
  out.pi = bivector_from_sharp(lift_values(sharp));
  out.sigma = TwoFormField{lift_values(sig)};
  return out;
}

GeneralizedF from_Sigma_pi(const std::vector<OneFormField>& Sigma, const BivectorField& pi,
                           const CoordinateDomain& dom) {
  int m = dom.dim;
  int r = static_cast<int>(Sigma.size());
  ExprMat scols = ezero_mat(m, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < m; ++i) scols[i][j] = Sigma[j].c[i];
  Eigen::MatrixXd Sm = const_mat(scols, dom);
  Eigen::MatrixXd P = const_mat(pi.c, dom);

  Eigen::MatrixXd restricted = Sm.transpose() * P * Sm;
  if (std::abs(restricted.determinant()) < 1e-12)
    throw StructureError("pi restricted to Sigma is degenerate", 0);

  // Sigma^{perp pi} = ker(S^T P . ), complement of Sigma in T*M
  Eigen::MatrixXd C = null_space(Eigen::MatrixXd(Sm.transpose() * P));
  if (C.cols() != m - r) throw StructureError("Sigma (+) Sigma^perp does not span T*M", 0);
  Eigen::MatrixXd SC = hcat(Sm, C);
  Eigen::FullPivLU<Eigen::MatrixXd> dec(SC);
  if (!dec.isInvertible()) throw StructureError("Sigma (+) Sigma^perp does not span T*M", 0);
  Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(m, m);
  sel.topLeftCorner(r, r) = Eigen::MatrixXd::Identity(r, r);
  Eigen::MatrixXd prS = SC * sel * dec.inverse();

  // W = sharp_pi(Sigma); complement ann Sigma = ker(S^T) in TM
  Eigen::MatrixXd Wm = P.transpose() * Sm;  // columns: sharp_pi s_i components
  Eigen::MatrixXd N = null_space(Eigen::MatrixXd(Sm.transpose()));
  Eigen::MatrixXd WN = hcat(Wm, N);
  Eigen::FullPivLU<Eigen::MatrixXd> band(WN);
  if (!band.isInvertible()) throw StructureError("image decomposition failed", 0);
  Eigen::MatrixXd coeff = band.inverse();
  Eigen::MatrixXd flat = -Sm * coeff.topRows(r);  // flat_sigma e_j = -S c_j

  Eigen::MatrixXd piP = prS.transpose() * P * prS;

  GeneralizedF out = zero_structure(dom);
  out.sigma = twoform_from_flat(lift_values(flat));
  out.pi = BivectorField{lift_values(piP)};
  return out;
}

// --- generalized almost contact --------------------------------------------------

GeneralizedF from_almost_contact(const AlmostContact& ac, double tol) {
  int m = ac.dom.dim;
  int h = ac.codim();
  ExprMat F = ac.F.c;
  ExprMat P = ac.P.c;
  ExprMat th = ac.theta.c;
  auto pts = probe_points(ac.dom);

  auto check = [&](const ExprMat& resid, const std::string& name) {
    for (const auto& p : pts) {
      double r = max_abs(eval_at(resid, p));
      if (r > tol) throw StructureError("almost contact identity failed: " + name, r);
    }
  };

  // P(a o F, b) = P(a, b o F)  <=>  F P = P tF (upper indices)
  check(esub(emul(F, P), emul(P, etranspose(F))), "P(a o F, b) = P(a, b o F)");
  // theta(FX, Y) = theta(X, FY)  <=>  tF theta = theta F
  check(esub(emul(etranspose(F), th), emul(th, F)), "theta(FX, Y) = theta(X, FY)");

  for (int a = 0; a < h; ++a) {
    check(ExprMat{eapply(F, ac.Z[a].c)}, "F(Z_a) = 0");
    check(ExprMat{eapply(etranspose(F), ac.xi[a].c)}, "xi^a o F = 0");
    check(ExprMat{interior_two(ac.Z[a], ac.theta).c}, "i(Z_a) theta = 0");
    check(ExprMat{sharp_apply(ac.P, ac.xi[a]).c}, "i(xi^a) P = 0");
    for (int b = 0; b < h; ++b) {
      ExprPtr want = lit(a == b ? 1.0 : 0.0);
      check(ExprMat{{sub(pair_form_vector(ac.xi[a], ac.Z[b]), want)}}, "xi^a(Z_b) = delta^a_b");
    }
  }

  // F^2 = -Id - sharp_P flat_theta + sum xi^a (x) Z_a
  ExprMat want = escale(lit(-1), eidentity(m));
  want = esub(want, emul(sharp_mat(ac.P), flat_mat(ac.theta)));
  for (int a = 0; a < h; ++a)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        want[i][j] = add(want[i][j], mul(ac.Z[a].c[i], ac.xi[a].c[j]));
  check(esub(emul(F, F), want), "F^2 = -Id - sharp_P flat_theta + xi (x) Z");

  GeneralizedF out = zero_structure(ac.dom);
  out.A = ac.F;
  out.pi = ac.P;
  out.sigma = ac.theta;
  return out;
}

GeneralizedF lift_to_product(const AlmostContact& ac) {
  int m = ac.dom.dim;
  int h = ac.codim();
  CoordinateDomain big = with_factors(ac.dom, h);
  int n = m + h;
  GeneralizedF out = zero_structure(big);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      out.A.c[i][j] = ac.F.c[i][j];
      out.pi.c[i][j] = ac.P.c[i][j];
      out.sigma.c[i][j] = ac.theta.c[i][j];
    }
  // pi' = P + sum Z_a ^ d/dt^a, sigma' = theta + sum xi^a ^ dt^a
  for (int a = 0; a < h; ++a)
    for (int i = 0; i < m; ++i) {
      out.pi.c[i][m + a] = ac.Z[a].c[i];
      out.pi.c[m + a][i] = neg(ac.Z[a].c[i]);
      out.sigma.c[i][m + a] = ac.xi[a].c[i];
      out.sigma.c[m + a][i] = neg(ac.xi[a].c[i]);
    }
  (void)n;
  return out;
}

CheckReport check_complementary_frames(const GeneralizedF& s, const std::vector<BigField>& neg_f,
                                       const std::vector<BigField>& pos_f,
                                       const CheckConfig& cfg) {
  int m = s.m();
  ExprMat phi = phi_matrix(s);
  ExprMat phi2 = emul(phi, phi);
  std::vector<BigField> all = neg_f;
  all.insert(all.end(), pos_f.begin(), pos_f.end());

  std::vector<ExprPtr> scalars;
  // normalization and pairwise orthogonality
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i; j < all.size(); ++j) {
      ExprPtr want = lit(0);
      if (i == j) want = lit(i < neg_f.size() ? -1.0 : 1.0);
      scalars.push_back(sub(pairing_g(all[i], all[j]), want));
    }
  // Phi Z = 0
  std::vector<BigField> vanish;
  for (const auto& z : all) vanish.push_back(big_apply(phi, z));

  // Phi^2 = -Id + sum_pos (g(Z,.) Z) - sum_neg (g(Z,.) Z) on basis sections
  std::vector<BigField> recon;
  for (int b = 0; b < 2 * m; ++b) {
    BigField basis = big_basis(m, b);
    BigField acc = big_apply(phi2, basis);
    acc = big_add(acc, basis);
    for (std::size_t i = 0; i < all.size(); ++i) {
      ExprPtr coeff = pairing_g(all[i], basis);
      BigField t = big_scale(coeff, all[i]);
      acc = i < neg_f.size() ? big_add(acc, t) : big_sub(acc, t);
    }
    recon.push_back(acc);
  }

  auto pts = sample_points(s.dom, cfg.samples, cfg.seed);
  PointResidual f = [scalars, vanish, recon](EvalContext& ctx) {
    double r = 0;
    for (const auto& e : scalars) r = std::max(r, std::abs(ctx.value(e)));
    for (const auto& v : vanish) r = std::max(r, sup_norm(ctx, v));
    for (const auto& v : recon) r = std::max(r, sup_norm(ctx, v));
    return r;
  };
  return scan_points("frames", f, s.dom, pts, cfg);
}

// --- B-field ----------------------------------------------------------------------

GeneralizedF b_field(const GeneralizedF& s, const TwoFormField& B) {
  int m = s.m();
  ExprMat fb = flat_mat(B);
  ExprMat e_plus = eidentity(2 * m);
  ExprMat e_minus = eidentity(2 * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      e_plus[m + i][j] = fb[i][j];
      e_minus[m + i][j] = neg(fb[i][j]);
    }
  ExprMat conj = emul(e_plus, emul(phi_matrix(s), e_minus));
  return structure_from_phi_matrix(conj, s.dom);
}

// --- graph structures ----------------------------------------------------------

GraphReport graph_structures(const GraphData& g, const CheckConfig& cfg) {
  int m = g.dom.dim;
  int r = static_cast<int>(g.V.size());
  auto pts = sample_points(g.dom, cfg.samples, cfg.seed);

  // isotropy of graph(flat_theta|V): automatic from antisymmetry, kept as a
  // sanity residual g((X, i(X)theta), (Y, i(Y)theta)) = 0
  std::vector<ExprPtr> iso;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      BigField a{g.V[i], interior_two(g.V[i], g.theta)};
      BigField b{g.V[j], interior_two(g.V[j], g.theta)};
      iso.push_back(pairing_g(a, b));
    }

  std::vector<VectorField> brackets;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) brackets.push_back(lie_bracket(g.V[i], g.V[j]));

  ThreeFormField dth = d_twoform(g.theta);
  std::vector<OneFormField> contractions;  // d theta(v_i, v_j, .)
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      contractions.push_back(interior_two(g.V[j], interior_three(g.V[i], dth)));

  ExprMat vcols = ezero_mat(m, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < m; ++i) vcols[i][j] = g.V[j].c[i];

  PointResidual iso_f = [iso](EvalContext& ctx) {
    double s = 0;
    for (const auto& e : iso) s = std::max(s, std::abs(ctx.value(e)));
    return s;
  };
  PointResidual inv_f = [brackets, vcols](EvalContext& ctx) {
    Eigen::MatrixXd V = ctx.value(vcols);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    double s = 0;
    for (const auto& b : brackets) {
      Eigen::VectorXd v = ctx.value(b.c);
      Eigen::VectorXd res = v - V * qr.solve(v);
      s = std::max(s, res.cwiseAbs().maxCoeff());
    }
    return s;
  };
  PointResidual dth_f = [contractions](EvalContext& ctx) {
    double s = 0;
    for (const auto& c : contractions)
      for (const auto& e : c.c) s = std::max(s, std::abs(ctx.value(e)));
    return s;
  };

  GraphReport rep;
  rep.isotropy = scan_points("graph-isotropy", iso_f, g.dom, pts, cfg);
  rep.involutivity = scan_points("graph-involutivity", inv_f, g.dom, pts, cfg);
  rep.dtheta = scan_points("graph-dtheta", dth_f, g.dom, pts, cfg);
  return rep;
}

DualGraphReport graph_structures_dual(const DualGraphData& g, const CheckConfig& cfg) {
  int m = g.dom.dim;
  int r = static_cast<int>(g.Sigma.size());
  auto pts = sample_points(g.dom, cfg.samples, cfg.seed);

  std::vector<ExprPtr> iso;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      BigField a{sharp_apply(g.pi, g.Sigma[i]), g.Sigma[i]};
      BigField b{sharp_apply(g.pi, g.Sigma[j]), g.Sigma[j]};
      iso.push_back(pairing_g(a, b));
    }

  std::vector<OneFormField> brackets;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      brackets.push_back(one_form_P_bracket(g.Sigma[i], g.Sigma[j], g.pi));

  TriVectorField sch = schouten_bracket(g.pi, g.pi);
  std::vector<OneFormField> contractions;  // components of [pi,pi](s_i, s_j, .)
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      OneFormField c{ezero_vec(m)};
      for (int k = 0; k < m; ++k) {
        ExprPtr s = lit(0);
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            s = add(s, mul(mul(g.Sigma[i].c[a], g.Sigma[j].c[b]), sch.c[a][b][k]));
        c.c[k] = s;
      }
      contractions.push_back(c);
    }

  ExprMat scols = ezero_mat(m, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < m; ++i) scols[i][j] = g.Sigma[j].c[i];

  PointResidual iso_f = [iso](EvalContext& ctx) {
    double s = 0;
    for (const auto& e : iso) s = std::max(s, std::abs(ctx.value(e)));
    return s;
  };
  PointResidual clo_f = [brackets, scols](EvalContext& ctx) {
    Eigen::MatrixXd S = ctx.value(scols);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S);
    double s = 0;
    for (const auto& b : brackets) {
      Eigen::VectorXd v = ctx.value(b.c);
      Eigen::VectorXd res = v - S * qr.solve(v);
      s = std::max(s, res.cwiseAbs().maxCoeff());
    }
    return s;
  };
  PointResidual sch_f = [contractions](EvalContext& ctx) {
    double s = 0;
    for (const auto& c : contractions)
      for (const auto& e : c.c) s = std::max(s, std::abs(ctx.value(e)));
    return s;
  };

  DualGraphReport rep;
  rep.isotropy = scan_points("dual-isotropy", iso_f, g.dom, pts, cfg);
  rep.closure = scan_points("dual-closure", clo_f, g.dom, pts, cfg);
  rep.schouten = scan_points("dual-schouten", sch_f, g.dom, pts, cfg);
  return rep;
}

}  // namespace crf
