#include "crf/catalog.hpp"

namespace crf {

namespace {

EndField rotation_f(int m, int a, int b) {
  EndField f{ezero_mat(m, m)};
  f.c[b][a] = lit(1);
  f.c[a][b] = lit(-1);
  return f;
}

TwoFormField two_form(int m, int i, int j, ExprPtr coeff) {
  TwoFormField t{ezero_mat(m, m)};
  t.c[i][j] = coeff;
  t.c[j][i] = neg(coeff);
  return t;
}

Payload classical_payload(const EndField& F, const CoordinateDomain& dom) {
  Payload p;
  p.dom = dom;
  p.structure = from_classical_F(F, dom);
  return p;
}

// lambda = z (holomorphic) or conj(z): F d1 = d2, F d2 = -d1,
// F d3 = Im(lambda) d1 - Re(lambda) d2
EndField nirenberg_f(bool holomorphic) {
  int m = 3;
  EndField f{ezero_mat(m, m)};
  f.c[1][0] = lit(1);
  f.c[0][1] = lit(-1);
  f.c[0][2] = holomorphic ? coord(2) : neg(coord(2));
  f.c[1][2] = neg(coord(1));
  return f;
}

// standard contact structure: e1 = d1 + x2 d3, e2 = d2, Z = d3,
// xi = dx3 - x2 dx1, F e1 = e2, F e2 = -e1
AlmostContact contact_r3() {
  int m = 3;
  AlmostContact ac;
  ac.dom = cube_domain(m);
  ac.P = BivectorField{ezero_mat(m, m)};
  ac.theta = TwoFormField{ezero_mat(m, m)};
  ac.F = EndField{ezero_mat(m, m)};
  ac.F.c[1][0] = lit(1);
  ac.F.c[0][1] = lit(-1);
  ac.F.c[2][1] = neg(coord(2));
  ac.Z = {basis_vector(m, 2)};
  OneFormField xi{ezero_vec(m)};
  xi.c[2] = lit(1);
  xi.c[0] = neg(coord(2));
  ac.xi = {xi};
  return ac;
}

// conformally twisted plane-field complex structure on the same contact
// distribution; fails normality
AlmostContact contact_r3_nonnormal() {
  AlmostContact ac = contact_r3();
  ExprPtr ez = exp_e(coord(3));
  ExprPtr emz = exp_e(neg(coord(3)));
  ac.F.c[1][0] = ez;
  ac.F.c[0][1] = neg(emz);
  ac.F.c[2][1] = neg(mul(coord(2), emz));
  return ac;
}

MetricField sasaki_metric(const OneFormField& xi) {
  int m = 3;
  MetricField g{ezero_mat(m, m)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g.c[i][j] = mul(xi.c[i], xi.c[j]);
  g.c[0][0] = add(g.c[0][0], lit(1));
  g.c[1][1] = add(g.c[1][1], lit(1));
  return g;
}

AlmostContactMetric sasaki_acm() {
  AlmostContact ac = contact_r3();
  return AlmostContactMetric{ac.F, ac.Z[0], ac.xi[0], sasaki_metric(ac.xi[0]), ac.dom};
}

Payload quadruple_payload(const MetricQuadruple& q) {
  Payload p;
  p.dom = q.dom;
  p.metric = make_metric(q.gamma, q.psi, q.dom);
  p.structure = reconstruct_phi(q);
  return p;
}

// n = 1, h = 1 instance of the flat-torus family: Euclidean metric,
// closed non-constant psi, rotations in the (1,2)- and (1,3)-planes
MetricQuadruple torus_quadruple(int n, int h) {
  int m = 2 * n + h;
  MetricQuadruple q;
  q.dom = torus_domain(m);
  q.gamma = MetricField{eidentity(m)};
  q.psi = TwoFormField{ezero_mat(m, m)};
  q.psi.c[0][1] = cos_e(coord(1));
  q.psi.c[1][0] = neg(cos_e(coord(1)));
  if (m > 2) {
    q.psi.c[1][2] = lit(0.4);
    q.psi.c[2][1] = lit(-0.4);
  }
  // F+ from z^a = x^a + i x^{n+a}; F- from w^u = x^u + i y^u
  q.Fp = EndField{ezero_mat(m, m)};
  for (int a = 0; a < n; ++a) {
    q.Fp.c[n + a][a] = lit(1);
    q.Fp.c[a][n + a] = lit(-1);
  }
  q.Fm = EndField{ezero_mat(m, m)};
  for (int u = 0; u < h && u < n; ++u) {
    q.Fm.c[2 * n + u][u] = lit(1);
    q.Fm.c[u][2 * n + u] = lit(-1);
  }
  return q;
}

EndField rotating_plane_f() {
  int m = 3;
  ExprPtr c = cos_e(coord(2)), s = sin_e(coord(2));
  EndField f{ezero_mat(m, m)};
  f.c[1][0] = c;
  f.c[0][1] = neg(c);
  f.c[2][1] = neg(s);
  f.c[1][2] = s;
  return f;
}

Fixture build(const std::string& name) {
  if (name == "classical-f-r3") {
    Fixture fx{name, classical_payload(rotation_f(3, 0, 1), cube_domain(3)), {}};
    fx.expected = {{"axioms", true},
                   {"integrability", true},
                   {"classical-crf", true},
                   {"ls-torsion", true}};
    return fx;
  }
  if (name == "nirenberg-holo") {
    Fixture fx{name, classical_payload(nirenberg_f(true), cube_domain(3)), {}};
    fx.expected = {{"axioms", true},
                   {"integrability", true},
                   {"classical-crf", true},
                   {"ls-torsion", true}};
    return fx;
  }
  if (name == "nirenberg-antiholo") {
    Fixture fx{name, classical_payload(nirenberg_f(false), cube_domain(3)), {}};
    fx.expected = {{"axioms", true}, {"integrability", false}, {"classical-crf", false}};
    return fx;
  }
  if (name == "skew-vsigma-r4") {
    int m = 4;
    auto dom = cube_domain(m);
    Payload p;
    p.dom = dom;
    p.structure = from_V_sigma({basis_vector(m, 0), basis_vector(m, 1)},
                               two_form(m, 0, 1, lit(1)), dom);
    Fixture fx{name, p, {}};
    fx.expected = {{"axioms", true}, {"integrability", true}, {"ls-torsion", true}};
    return fx;
  }
  if (name == "symplectic-r2" || name == "symplectic-r4") {
    int m = name == "symplectic-r2" ? 2 : 4;
    auto dom = cube_domain(m);
    std::vector<VectorField> V;
    for (int i = 0; i < m; ++i) V.push_back(basis_vector(m, i));
    TwoFormField sig{ezero_mat(m, m)};
    for (int k = 0; k + 1 < m; k += 2) {
      sig.c[k][k + 1] = lit(1);
      sig.c[k + 1][k] = lit(-1);
    }
    Payload p;
    p.dom = dom;
    p.structure = from_V_sigma(V, sig, dom);
    Fixture fx{name, p, {}};
    fx.expected = {{"axioms", true}, {"integrability", true}};
    return fx;
  }
  if (name == "symplectic-fibration") {
    int m = 4;
    GraphData g;
    g.dom = cube_domain(m);
    g.V = {basis_vector(m, 2), basis_vector(m, 3)};
    g.theta = two_form(m, 2, 3, add(lit(1), powi(coord(3), 2)));
    Payload p;
    p.dom = g.dom;
    p.graph = g;
    Fixture fx{name, p, {}};
    fx.expected = {{"axioms", true}, {"integrability", true}};
    return fx;
  }
  if (name == "contact-r3" || name == "contact-r3-nonnormal") {
    AlmostContact ac = name == "contact-r3" ? contact_r3() : contact_r3_nonnormal();
    Payload p;
    p.dom = ac.dom;
    p.almost_contact = ac;
    Fixture fx{name, p, {}};
    bool normal = name == "contact-r3";
    fx.expected = {{"axioms", true}, {"integrability", normal}};
    if (normal) fx.expected.push_back({"frames", true});
    return fx;
  }
  if (name == "contact-r3-lift" || name == "contact-r3-nonnormal-lift") {
    bool normal = name == "contact-r3-lift";
    AlmostContact ac = normal ? contact_r3() : contact_r3_nonnormal();
    GeneralizedF lift = lift_to_product(ac);
    Payload p;
    p.dom = lift.dom;
    p.structure = lift;
    Fixture fx{name, p, {}};
    fx.expected = {{"axioms", true}, {"integrability", normal}};
    return fx;
  }
  if (name == "metric-f-r3") {
    int m = 3;
    MetricQuadruple q;
    q.dom = cube_domain(m);
    q.gamma = MetricField{eidentity(m)};
    q.psi = TwoFormField{ezero_mat(m, m)};
    q.Fp = rotation_f(m, 0, 1);
    q.Fm = rotation_f(m, 0, 1);
    Fixture fx{name, quadruple_payload(q), {}};
    fx.expected = {{"axioms", true},        {"integrability", true},
                   {"metric-axioms", true}, {"metric-compat", true},
                   {"quadruple-roundtrip", true}, {"crfk", true},
                   {"partial-kahler", true}};
    return fx;
  }
  if (name == "crfk-torus") {
    Fixture fx{name, quadruple_payload(torus_quadruple(1, 1)), {}};
    fx.expected = {{"axioms", true},        {"integrability", true},
                   {"metric-axioms", true}, {"metric-compat", true},
                   {"quadruple-roundtrip", true}, {"crfk", true},
                   {"partial-kahler", true}};
    return fx;
  }
  if (name == "crfk-torus-2-1") {
    Fixture fx{name, quadruple_payload(torus_quadruple(2, 1)), {}};
    fx.expected = {{"metric-compat", true}, {"crfk", true}, {"partial-kahler", true}};
    return fx;
  }
  if (name == "flat-kahler-r2") {
    int m = 2;
    MetricQuadruple q;
    q.dom = cube_domain(m);
    q.gamma = MetricField{eidentity(m)};
    q.psi = TwoFormField{ezero_mat(m, m)};
    q.Fp = rotation_f(m, 0, 1);
    q.Fm = rotation_f(m, 0, 1);
    Fixture fx{name, quadruple_payload(q), {}};
    fx.expected = {{"axioms", true},        {"integrability", true},
                   {"metric-axioms", true}, {"metric-compat", true},
                   {"quadruple-roundtrip", true}, {"crfk", true},
                   {"gualtieri", true},     {"partial-kahler", true}};
    return fx;
  }
  if (name == "kahler-nonclosed-r4") {
    int m = 4;
    MetricQuadruple q;
    q.dom = cube_domain(m);
    q.gamma = MetricField{eidentity(m)};
    q.psi = two_form(m, 0, 1, coord(3));
    EndField J{ezero_mat(m, m)};
    J.c[1][0] = lit(1);
    J.c[0][1] = lit(-1);
    J.c[3][2] = lit(1);
    J.c[2][3] = lit(-1);
    q.Fp = J;
    q.Fm = J;
    Fixture fx{name, quadruple_payload(q), {}};
    fx.expected = {{"axioms", true},
                   {"metric-axioms", true},
                   {"metric-compat", true},
                   {"crfk", false},
                   {"gualtieri", false}};
    return fx;
  }
  if (name == "nonparallel-q-r3") {
    int m = 3;
    MetricQuadruple q;
    q.dom = cube_domain(m);
    q.gamma = MetricField{eidentity(m)};
    q.psi = TwoFormField{ezero_mat(m, m)};
    q.Fp = rotating_plane_f();
    q.Fm = rotation_f(m, 0, 1);
    Fixture fx{name, quadruple_payload(q), {}};
    fx.expected = {{"axioms", true},
                   {"metric-axioms", true},
                   {"metric-compat", true},
                   {"crfk", false},
                   {"partial-kahler", false}};
    return fx;
  }
  if (name == "cosymplectic-r3") {
    int m = 3;
    AlmostContact ac;
    ac.dom = cube_domain(m);
    ac.P = BivectorField{ezero_mat(m, m)};
    ac.theta = TwoFormField{ezero_mat(m, m)};
    ac.F = rotation_f(m, 0, 1);
    ac.Z = {basis_vector(m, 2)};
    ac.xi = {basis_oneform(m, 2)};
    Payload p;
    p.dom = ac.dom;
    p.almost_contact = ac;
    p.metric = make_metric(MetricField{eidentity(m)}, TwoFormField{ezero_mat(m, m)}, ac.dom);
    Fixture fx{name, p, {}};
    fx.expected = {{"axioms", true},
                   {"classical-crf", true},
                   {"metric-axioms", true},
                   {"cosymplectic", true}};
    return fx;
  }
  if (name == "sasaki-r3" || name == "sasaki-r3-broken") {
    AlmostContactMetric acm = sasaki_acm();
    SasakiInput s;
    s.dom = acm.dom;
    s.plus = acm;
    s.minus = acm;
    s.psi = TwoFormField{ezero_mat(3, 3)};
    s.kappa = OneFormField{ezero_vec(3)};
    bool broken = name == "sasaki-r3-broken";
    if (broken) {
      s.psi.c[0][1] = sin_e(coord(3));
      s.psi.c[1][0] = neg(sin_e(coord(3)));
    }
    Payload p;
    p.dom = s.dom;
    p.sasaki = s;
    p.metric = make_metric(acm.gamma, s.psi, acm.dom);
    Fixture fx{name, p, {}};
    fx.expected = {{"metric-axioms", true}, {"sasakian", !broken}};
    return fx;
  }
  throw InputError("unknown catalog fixture '" + name + "'");
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {
      "classical-f-r3",       "nirenberg-holo",
      "nirenberg-antiholo",   "skew-vsigma-r4",
      "symplectic-r2",        "symplectic-r4",
      "symplectic-fibration", "contact-r3",
      "contact-r3-nonnormal", "contact-r3-lift",
      "contact-r3-nonnormal-lift", "metric-f-r3",
      "crfk-torus",           "flat-kahler-r2",
      "kahler-nonclosed-r4",  "nonparallel-q-r3",
      "cosymplectic-r3",      "sasaki-r3",
      "sasaki-r3-broken"};
  return names;
}

Fixture catalog_get(const std::string& name) { return build(name); }

std::vector<CatalogRunResult> catalog_run(const std::string& name, const CheckConfig& cfg) {
  Fixture fx = catalog_get(name);
  std::vector<CatalogRunResult> out;
  for (const auto& [check, expect] : fx.expected) {
    CatalogRunResult r;
    r.fixture = fx.name;
    r.report = run_check(fx.payload, CheckSpec{check, {}}, cfg);
    r.expected_pass = expect;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CatalogRunResult> catalog_run_all(const CheckConfig& cfg) {
  std::vector<CatalogRunResult> out;
  for (const auto& name : catalog_names()) {
    auto part = catalog_run(name, cfg);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace crf
