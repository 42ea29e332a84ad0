#include "crf/tensorcalc.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace crf;

namespace {

double max_abs(const ExprVec& v, const Point& p) {
  double r = 0;
  for (auto& e : v) r = std::max(r, std::abs(eval(e, p)));
  return r;
}

double max_abs(const ExprMat& a, const Point& p) {
  double r = 0;
  for (auto& row : a) r = std::max(r, max_abs(row, p));
  return r;
}

}  // namespace

TEST_CASE("lie bracket basics") {
  int m = 2;
  auto d1 = basis_vector(m, 0);
  auto d2 = basis_vector(m, 1);
  auto b = lie_bracket(d1, d2);
  CHECK(is_zero(b.c[0]));
  CHECK(is_zero(b.c[1]));

  // [x1 d2, d1] = -d2
  VectorField xd2{{lit(0), coord(1)}};
  auto b2 = lie_bracket(xd2, d1);
  Point p{0.3, -0.4};
  CHECK(eval(b2.c[0], p) == doctest::Approx(0.0));
  CHECK(eval(b2.c[1], p) == doctest::Approx(-1.0));
}

TEST_CASE("lie bracket Jacobi identity on random polynomial triples") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 3;
    auto x = test::random_vector_field(rng, m);
    auto y = test::random_vector_field(rng, m);
    auto z = test::random_vector_field(rng, m);
    auto a = lie_bracket(lie_bracket(x, y), z);
    auto b = lie_bracket(lie_bracket(y, z), x);
    auto c = lie_bracket(lie_bracket(z, x), y);
    for (int k = 0; k < 5; ++k) {
      Point p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      for (int i = 0; i < m; ++i)
        CHECK(std::abs(eval(add(add(a.c[i], b.c[i]), c.c[i]), p)) < 1e-10);
    }
  }
}

TEST_CASE("exterior derivative") {
  int m = 2;
  // d(x1 dx2) = dx1 ^ dx2
  OneFormField a{{lit(0), coord(1)}};
  auto da = d_oneform(a);
  Point p{0.7, 0.1};
  CHECK(eval(da.c[0][1], p) == doctest::Approx(1.0));
  CHECK(eval(da.c[1][0], p) == doctest::Approx(-1.0));

  // constant 2-form is closed
  TwoFormField w = wedge_forms(basis_oneform(m, 0), basis_oneform(m, 1));
  auto dw = d_twoform(w);
  CHECK(max_abs(dw.c[0][0], p) == 0.0);

  // d(df) = 0 for random f
  SplitMix64 rng(37);
  for (int t = 0; t < 20; ++t) {
    auto f = test::random_trig_poly(rng, 3);
    auto ddf = d_oneform(d_scalar(f, 3));
    for (int k = 0; k < 5; ++k) {
      Point q{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      CHECK(max_abs(ddf.c, q) < 1e-10);
    }
  }
}

TEST_CASE("d^2 = 0 on 1-forms") {
  SplitMix64 rng(41);
  for (int t = 0; t < 20; ++t) {
    auto a = test::random_oneform_field(rng, 3);
    auto dda = d_twoform(d_oneform(a));
    for (int k = 0; k < 100; ++k) {
      Point q{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      double r = 0;
      for (auto& plane : dda.c)
        for (auto& row : plane) r = std::max(r, max_abs(row, q));
      CHECK(r < 1e-10);
    }
  }
}

TEST_CASE("lie derivative basics and Killing field") {
  int m = 2;
  // L_{x1 d1} dx1 = dx1
  VectorField x{{coord(1), lit(0)}};
  auto l = lie_oneform(x, basis_oneform(m, 0));
  Point p{1.3, 0.2};
  CHECK(eval(l.c[0], p) == doctest::Approx(1.0));
  CHECK(eval(l.c[1], p) == doctest::Approx(0.0));

  // L_{d1} (Euclidean gamma) = 0
  auto lg = lie_cov2(basis_vector(m, 0), eidentity(m));
  CHECK(max_abs(lg, p) == 0.0);
}

TEST_CASE("Cartan magic formula for 2-forms: L_X th = i_X d th + d i_X th") {
  SplitMix64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 3;
    auto x = test::random_vector_field(rng, m);
    auto th = test::random_twoform_field(rng, m);
    auto lhs = lie_cov2(x, th.c);
    auto rhs1 = interior_three(x, d_twoform(th));
    auto rhs2 = d_oneform(interior_two(x, th));
    auto rhs = eadd(rhs1.c, rhs2.c);
    for (int k = 0; k < 10; ++k) {
      Point q{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      CHECK(max_abs(esub(lhs, rhs), q) < 1e-10);
    }
  }
}

TEST_CASE("Cartan magic formula for 1-forms") {
  SplitMix64 rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 3;
    auto x = test::random_vector_field(rng, m);
    auto a = test::random_oneform_field(rng, m);
    auto lhs = lie_oneform(x, a);
    auto da = d_oneform(a);
    auto rhs1 = interior_two(x, da);
    auto rhs2 = d_scalar(pair_form_vector(a, x), m);
    for (int k = 0; k < 10; ++k) {
      Point q{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      double r = 0;
      for (int i = 0; i < m; ++i)
        r = std::max(r, std::abs(eval(sub(lhs.c[i], add(rhs1.c[i], rhs2.c[i])), q)));
      CHECK(r < 1e-10);
    }
  }
}

TEST_CASE("interior product") {
  int m = 3;
  auto w = wedge_forms(basis_oneform(m, 0), basis_oneform(m, 1));
  auto i1 = interior_two(basis_vector(m, 0), w);
  Point p{0, 0, 0};
  CHECK(eval(i1.c[1], p) == doctest::Approx(1.0));
  CHECK(eval(i1.c[0], p) == doctest::Approx(0.0));
  auto i3 = interior_two(basis_vector(m, 2), w);
  CHECK(max_abs(i3.c, p) == 0.0);

  SplitMix64 rng(53);
  auto x = test::random_vector_field(rng, m);
  auto th = test::random_twoform_field(rng, m);
  auto ixix = pair_form_vector(interior_two(x, th), x);  // i(X)i(X)th = th(X,X) = 0
  for (int k = 0; k < 10; ++k) {
    Point q{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    CHECK(std::abs(eval(ixix, q)) < 1e-12);
  }
}

TEST_CASE("wedge of one-forms") {
  int m = 2;
  auto dx1 = basis_oneform(m, 0);
  auto dx2 = basis_oneform(m, 1);
  auto w = wedge_forms(dx1, dx2);
  Point p{0, 0};
  // evaluated on (d1, d2)
  CHECK(eval(w.c[0][1], p) == doctest::Approx(1.0));

  auto aa = wedge_forms(dx1, dx1);
  CHECK(max_abs(aa.c, p) == 0.0);

  OneFormField s{{lit(1), lit(1)}};  // dx1 + dx2
  auto w2 = wedge_forms(s, dx2);
  CHECK(eval(w2.c[0][1], p) == doctest::Approx(1.0));
  CHECK(eval(w2.c[1][0], p) == doctest::Approx(-1.0));
}

namespace {

// Brute-force Jacobiator oracle: {f,{g,h}} + cyc for coordinate functions,
// computed directly from the definition {f,g} = P(df,dg).
ExprPtr poisson_bracket(const BivectorField& p, const ExprPtr& f, const ExprPtr& g) {
  int m = p.dim();
  ExprPtr s = lit(0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      s = add(s, mul(p.c[i][j], mul(partial(f, i + 1), partial(g, j + 1))));
  return s;
}

ExprPtr jacobiator(const BivectorField& p, const ExprPtr& f, const ExprPtr& g, const ExprPtr& h) {
  return add(add(poisson_bracket(p, f, poisson_bracket(p, g, h)),
                 poisson_bracket(p, g, poisson_bracket(p, h, f))),
             poisson_bracket(p, h, poisson_bracket(p, f, g)));
}

}  // namespace

TEST_CASE("schouten bracket: Poisson cases vanish") {
  // constant coefficients
  int m = 3;
  BivectorField c{ezero_mat(m, m)};
  c.c[0][1] = lit(2);
  c.c[1][0] = lit(-2);
  c.c[1][2] = lit(-0.5);
  c.c[2][1] = lit(0.5);
  auto ss = schouten_bracket(c, c);
  Point p{0.2, -0.7, 1.1};
  CHECK(std::abs(eval(ss.c[0][1][2], p)) < 1e-12);

  // P = x3 d1 ^ d2 on R^3
  BivectorField lin{ezero_mat(m, m)};
  lin.c[0][1] = coord(3);
  lin.c[1][0] = neg(coord(3));
  auto sl = schouten_bracket(lin, lin);
  CHECK(std::abs(eval(sl.c[0][1][2], p)) < 1e-12);
  CHECK(std::abs(eval(sl.c[2][0][1], p)) < 1e-12);

  // so(3)-type: x1 d2^d3 + x2 d3^d1 + x3 d1^d2
  BivectorField so3{ezero_mat(m, m)};
  so3.c[1][2] = coord(1);
  so3.c[2][1] = neg(coord(1));
  so3.c[2][0] = coord(2);
  so3.c[0][2] = neg(coord(2));
  so3.c[0][1] = coord(3);
  so3.c[1][0] = neg(coord(3));
  auto s3 = schouten_bracket(so3, so3);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) CHECK(std::abs(eval(s3.c[i][j][k], p)) < 1e-12);
}

TEST_CASE("schouten bracket vs brute-force Jacobiator, and symmetry") {
  SplitMix64 rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 3;
    // random linear bivector
    BivectorField p{ezero_mat(m, m)};
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        ExprPtr e = add(lit(rng.uniform(-1, 1)),
                        mul(lit(rng.uniform(-1, 1)), coord(1 + static_cast<int>(rng.next() % m))));
        p.c[i][j] = e;
        p.c[j][i] = neg(e);
      }
    auto br = schouten_bracket(p, p);
    for (int k = 0; k < 5; ++k) {
      Point q{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
      // [P,P](dx^i,dx^j,dx^k) = 2 * Jacobiator(x_i, x_j, x_k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int l = 0; l < m; ++l) {
            double lhs = eval(br.c[i][j][l], q);
            double rhs = 2 * eval(jacobiator(p, coord(i + 1), coord(j + 1), coord(l + 1)), q);
            CHECK(std::abs(lhs - rhs) < 1e-10);
          }
    }
    // symmetric in (P,Q) for bivectors
    auto p2 = test::random_bivector_field(rng, m);
    auto pq = schouten_bracket(p, p2);
    auto qp = schouten_bracket(p2, p);
    Point q{0.4, 0.5, -0.6};
    CHECK(std::abs(eval(pq.c[0][1][2], q) - eval(qp.c[0][1][2], q)) < 1e-12);
  }
}

TEST_CASE("one-form P-bracket") {
  int m = 2;
  BivectorField p{ezero_mat(m, m)};
  p.c[0][1] = lit(1);
  p.c[1][0] = lit(-1);
  auto z = one_form_P_bracket(basis_oneform(m, 0), basis_oneform(m, 1), p);
  Point q{0.3, 0.8};
  CHECK(max_abs(z.c, q) < 1e-12);

  // {df, dg}_P = d(P(df,dg)) for any Poisson P with constant coefficients
  SplitMix64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = test::random_polynomial(rng, m);
    auto g = test::random_polynomial(rng, m);
    auto df = d_scalar(f, m);
    auto dg = d_scalar(g, m);
    auto lhs = one_form_P_bracket(df, dg, p);
    auto rhs = d_scalar(eval_bivector(p, df, dg), m);
    for (int k = 0; k < 5; ++k) {
      Point pt{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      for (int i = 0; i < m; ++i) CHECK(std::abs(eval(sub(lhs.c[i], rhs.c[i]), pt)) < 1e-10);
    }
  }

  // antisymmetry: {a,a}_P = 0
  auto a = test::random_oneform_field(rng, m);
  auto aa = one_form_P_bracket(a, a, p);
  Point pt{0.5, -0.25};
  CHECK(max_abs(aa.c, pt) < 1e-12);
}

TEST_CASE("Levi-Civita connection") {
  int m = 3;
  MetricField flat{eidentity(m)};
  auto conn = levi_civita(flat);
  Point p{0.1, 0.2, 0.3};
  for (int k = 0; k < m; ++k) CHECK(max_abs(conn.christoffel[k], p) == 0.0);

  // gamma = (1 + x1^2) * Euclidean
  ExprPtr w = add(lit(1), powi(coord(1), 2));
  MetricField g{escale(w, eidentity(m))};
  auto c = levi_civita(g);

  // symmetry in the lower indices
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        CHECK(std::abs(eval(sub(c.christoffel[k][i][j], c.christoffel[k][j][i]), p)) < 1e-12);

  // nabla gamma = 0
  auto ng = covariant_derivative_cov2(c, g.c);
  for (int k = 0; k < m; ++k) CHECK(max_abs(ng[k], p) < 1e-9);

  // frozen oracle value: Gamma^1_{11} = x1 / (1 + x1^2)
  double expect = 0.1 / (1 + 0.01);
  CHECK(eval(c.christoffel[0][0][0], p) == doctest::Approx(expect));
}

TEST_CASE("covariant derivative of an endomorphism") {
  int m = 2;
  // Euclidean metric: nabla F = coordinatewise partials
  MetricField flat{eidentity(m)};
  auto conn = levi_civita(flat);
  EndField f{ezero_mat(m, m)};
  f.c[0][0] = coord(1);
  f.c[0][1] = mul(coord(1), coord(2));
  f.c[1][0] = lit(3);
  f.c[1][1] = sin_e(coord(2));
  auto nf = covariant_derivative_end(conn, f);
  Point p{0.4, -0.3};
  CHECK(eval(nf[0][0][0], p) == doctest::Approx(1.0));
  CHECK(eval(nf[0][0][1], p) == doctest::Approx(-0.3));
  CHECK(eval(nf[1][1][1], p) == doctest::Approx(std::cos(-0.3)));

  // constant F: nabla F = 0
  EndField cf{from_values({{0, -1}, {1, 0}})};
  auto ncf = covariant_derivative_end(conn, cf);
  for (int k = 0; k < m; ++k) CHECK(max_abs(ncf[k], p) == 0.0);
}

TEST_CASE("covariant derivative vs finite differences (curved metric)") {
  int m = 2;
  ExprPtr w = add(lit(1), mul(lit(0.3), powi(coord(1), 2)));
  MetricField g{escale(w, eidentity(m))};
  auto conn = levi_civita(g);
  EndField f{ezero_mat(m, m)};
  f.c[0][1] = mul(lit(-1), add(lit(1), mul(lit(0.2), coord(2))));
  f.c[1][0] = add(lit(1), mul(lit(0.2), coord(2)));
  auto nf = covariant_derivative_end(conn, f);

  // independent oracle: finite-difference partials of F and of the metric
  // (Christoffels rebuilt numerically), contracted by hand
  Point p{0.35, -0.2};
  auto num_partial = [&](const ExprPtr& e, int k) {
    return test::central_diff5(e, p, k, 1e-4);
  };
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        // numeric Christoffels
        Eigen::MatrixXd gv = eval_at(g.c, p);
        Eigen::MatrixXd ginv = gv.inverse();
        double sym = eval(nf[k][i][j], p);
        double val = num_partial(f.c[i][j], k);
        for (int l = 0; l < m; ++l) {
          double gamma_ikl = 0, gamma_lkj = 0;
          for (int r = 0; r < m; ++r) {
            gamma_ikl += 0.5 * ginv(i, r) *
                         (num_partial(g.c[r][l], k) + num_partial(g.c[r][k], l) -
                          num_partial(g.c[k][l], r));
            gamma_lkj += 0.5 * ginv(l, r) *
                         (num_partial(g.c[r][j], k) + num_partial(g.c[r][k], j) -
                          num_partial(g.c[k][j], r));
          }
          val += gamma_ikl * eval(f.c[l][j], p) - gamma_lkj * eval(f.c[i][l], p);
        }
        double scale = std::max({1.0, std::abs(sym), std::abs(val)});
        CHECK(std::abs(sym - val) / scale < 1e-5);
      }
}
