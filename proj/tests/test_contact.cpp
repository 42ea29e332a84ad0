#include "crf/contact.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace crf;

namespace {

CheckConfig quick() {
  CheckConfig cfg;
  cfg.samples = 30;
  return cfg;
}

// standard contact metric structure: xi = dx3 - x2 dx1, Z = d3,
// e1 = d1 + x2 d3, e2 = d2, F e1 = e2, F e2 = -e1, gamma makes (e1,e2,Z)
// orthonormal; satisfies Xi = d xi and normality (Sasakian)
AlmostContactMetric sasaki_r3() {
  int m = 3;
  AlmostContactMetric a;
  a.dom = cube_domain(m);
  a.F = EndField{ezero_mat(m, m)};
  a.F.c[1][0] = lit(1);
  a.F.c[0][1] = lit(-1);
  a.F.c[2][1] = neg(coord(2));
  a.Z = basis_vector(m, 2);
  a.xi = OneFormField{ezero_vec(m)};
  a.xi.c[2] = lit(1);
  a.xi.c[0] = neg(coord(2));
  // gamma = xi (x) xi + dx1^2 + dx2^2
  a.gamma = MetricField{ezero_mat(m, m)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a.gamma.c[i][j] = mul(a.xi.c[i], a.xi.c[j]);
  a.gamma.c[0][0] = add(a.gamma.c[0][0], lit(1));
  a.gamma.c[1][1] = add(a.gamma.c[1][1], lit(1));
  return a;
}

// flat product of a Kaehler plane and a line: cosymplectic
AlmostContactMetric cosymplectic_r3() {
  int m = 3;
  AlmostContactMetric a;
  a.dom = cube_domain(m);
  a.F = EndField{ezero_mat(m, m)};
  a.F.c[1][0] = lit(1);
  a.F.c[0][1] = lit(-1);
  a.Z = basis_vector(m, 2);
  a.xi = basis_oneform(m, 2);
  a.gamma = MetricField{eidentity(m)};
  return a;
}

}  // namespace

TEST_CASE("acm validation accepts the standard fixtures") {
  validate_acm(sasaki_r3());
  validate_acm(cosymplectic_r3());

  // derived identities: i(Z)Xi = 0, xi(Z) = 1, xi o F = 0, F Z = 0
  for (auto a : {sasaki_r3(), cosymplectic_r3()}) {
    TwoFormField Xi = fundamental_form(a);
    OneFormField izXi = interior_two(a.Z, Xi);
    ExprPtr xz = pair_form_vector(a.xi, a.Z);
    ExprVec xiF = eapply(etranspose(a.F.c), a.xi.c);
    ExprVec FZ = eapply(a.F.c, a.Z.c);
    auto pts = sample_points(a.dom, 25, 3);
    for (const auto& p : pts) {
      for (auto& e : izXi.c) CHECK(std::abs(eval(e, p)) < 1e-10);
      CHECK(std::abs(eval(xz, p) - 1.0) < 1e-10);
      for (auto& e : xiF) CHECK(std::abs(eval(e, p)) < 1e-10);
      for (auto& e : FZ) CHECK(std::abs(eval(e, p)) < 1e-10);
    }
  }

  // broken metric rejected
  AlmostContactMetric bad = sasaki_r3();
  bad.gamma.c[0][0] = lit(3);
  CHECK_THROWS_AS(validate_acm(bad), StructureError);
}

TEST_CASE("fundamental form of the contact fixture equals d xi") {
  AlmostContactMetric a = sasaki_r3();
  TwoFormField Xi = fundamental_form(a);
  TwoFormField dxi = d_oneform(a.xi);
  auto pts = sample_points(a.dom, 25, 11);
  for (const auto& p : pts)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(eval(Xi.c[i][j], p) - eval(dxi.c[i][j], p)) < 1e-12);

  // F = 0 gives Xi = 0
  AlmostContactMetric z = cosymplectic_r3();
  z.F = EndField{ezero_mat(3, 3)};
  TwoFormField Xz = fundamental_form(z);
  CHECK(eval_at(Xz.c, pts[0]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("product lift: complex structure, Hermitian metric, Kaehler form") {
  for (auto a : {sasaki_r3(), cosymplectic_r3()}) {
    ProductLift lift = product_lift(a);
    auto pts = sample_points(lift.dom, 25, 13);
    for (const auto& p : pts) {
      Eigen::MatrixXd J = eval_at(lift.J.c, p);
      Eigen::MatrixXd G = eval_at(lift.Gamma.c, p);
      Eigen::MatrixXd W = eval_at(lift.omega.c, p);
      CHECK((J * J + Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((J.transpose() * G * J - G).cwiseAbs().maxCoeff() < 1e-10);
      // omega(X,Y) = Gamma(JX, Y), i.e. stored omega = J^T Gamma
      CHECK((J.transpose() * G - W).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  // Sasakian: d omega = 0; for a non-contact acm (Xi != d xi): d omega != 0
  ProductLift sas = product_lift(sasaki_r3());
  ThreeFormField dw = d_twoform(sas.omega);
  auto pts = sample_points(sas.dom, 25, 17);
  double r = 0;
  for (const auto& p : pts)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) r = std::max(r, std::abs(eval(dw.c[i][j][k], p)));
  CHECK(r < 1e-10);

  ProductLift cos = product_lift(cosymplectic_r3());  // Xi != d xi = 0
  ThreeFormField dwc = d_twoform(cos.omega);
  double rc = 0;
  for (const auto& p : pts)
    rc = std::max(rc, std::abs(eval(dwc.c[0][1][3], p)));
  CHECK(rc > 1e-3);
}

TEST_CASE("cosymplectic criterion") {
  auto cfg = quick();
  CHECK(check_cosymplectic(cosymplectic_r3(), cfg).pass);

  // the contact fixture fails (d xi != 0)
  auto rep = check_cosymplectic(sasaki_r3(), cfg);
  CHECK_FALSE(rep.pass);
  CHECK(rep.residual > 1e-3);
}

TEST_CASE("normality of the fixtures") {
  auto cfg = quick();
  CHECK(check_normality(sasaki_r3(), cfg).pass);
  CHECK(check_normality(cosymplectic_r3(), cfg).pass);
}

TEST_CASE("cosymplectic criterion on the flat torus") {
  auto cfg = quick();
  AlmostContactMetric a = cosymplectic_r3();
  a.dom = torus_domain(3);
  CHECK(check_cosymplectic(a, cfg).pass);
}

TEST_CASE("normal but non-Sasakian records fail the Sasakian conditions") {
  // cosymplectic records with psi = kappa = 0: normality holds but
  // Xi != d xi, so the last condition has a residual of order one
  auto cfg = quick();
  SasakiInput s;
  s.dom = cube_domain(3);
  s.plus = cosymplectic_r3();
  s.minus = cosymplectic_r3();
  s.psi = TwoFormField{ezero_mat(3, 3)};
  s.kappa = OneFormField{ezero_vec(3)};
  auto rep = check_generalized_sasakian(s, cfg);
  CHECK_FALSE(rep.pass);
  CHECK(rep.residual > 0.5);
  MetricQuadruple q = sasakian_product_quadruple(s);
  auto gual = check_gualtieri_kahler(q, cfg);
  CHECK(gual.pass == rep.pass);
}

TEST_CASE("generalized Sasakian: classical pair with psi = kappa = 0 passes") {
  auto cfg = quick();
  SasakiInput s;
  s.dom = cube_domain(3);
  s.plus = sasaki_r3();
  s.minus = sasaki_r3();
  s.psi = TwoFormField{ezero_mat(3, 3)};
  s.kappa = OneFormField{ezero_vec(3)};
  auto rep = check_generalized_sasakian(s, cfg);
  CHECK(rep.pass);

  // product cross-check agrees
  MetricQuadruple q = sasakian_product_quadruple(s);
  auto gual = check_gualtieri_kahler(q, cfg);
  CHECK(gual.pass == rep.pass);
}

TEST_CASE("generalized Sasakian: broken psi fails and the product check agrees") {
  auto cfg = quick();
  SasakiInput s;
  s.dom = cube_domain(3);
  s.plus = sasaki_r3();
  s.minus = sasaki_r3();
  // i(Z) psi = 0 but L_Z psi != 0
  s.psi = TwoFormField{ezero_mat(3, 3)};
  s.psi.c[0][1] = sin_e(coord(3));
  s.psi.c[1][0] = neg(sin_e(coord(3)));
  s.kappa = OneFormField{ezero_vec(3)};
  auto rep = check_generalized_sasakian(s, cfg);
  CHECK_FALSE(rep.pass);
  CHECK(rep.residual > 1e-3);

  MetricQuadruple q = sasakian_product_quadruple(s);
  auto gual = check_gualtieri_kahler(q, cfg);
  CHECK(gual.pass == rep.pass);
}

TEST_CASE("generalized Sasakian rejects non-normal records") {
  auto cfg = quick();
  SasakiInput s;
  s.dom = cube_domain(3);
  s.plus = sasaki_r3();
  // twist the minus record into a non-normal acm (see genstruct tests)
  AlmostContactMetric bad = sasaki_r3();
  ExprPtr ez = exp_e(coord(3));
  ExprPtr emz = exp_e(neg(coord(3)));
  bad.F.c[1][0] = ez;
  bad.F.c[0][1] = neg(emz);
  bad.F.c[2][1] = neg(mul(coord(2), emz));
  // rebuild gamma so that F stays gamma-compatible: with F e1 = e^{x3} e2 the
  // identity gamma(FX,FY) = gamma(X,Y) - xi(X)xi(Y) forces
  // gamma = xi (x) xi + dx1^2 + e^{-2 x3} dx2^2
  bad.gamma = MetricField{ezero_mat(3, 3)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) bad.gamma.c[i][j] = mul(bad.xi.c[i], bad.xi.c[j]);
  bad.gamma.c[0][0] = add(bad.gamma.c[0][0], lit(1));
  bad.gamma.c[1][1] = add(bad.gamma.c[1][1], exp_e(mul(lit(-2), coord(3))));
  s.minus = bad;
  s.psi = TwoFormField{ezero_mat(3, 3)};
  s.kappa = OneFormField{ezero_vec(3)};
  CHECK_THROWS_AS(check_generalized_sasakian(s, cfg), StructureError);
}
