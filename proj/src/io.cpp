#include "crf/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace crf {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

void require_keys(const json& j, const std::string& path,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto& [key, _] : j.items()) {
    bool known = false;
    for (auto& k : required) known = known || k == key;
    for (auto& k : optional) known = known || k == key;
    if (!known) fail(path + "." + key, "unknown key");
  }
  for (auto& k : required)
    if (!j.contains(k)) fail(path + "." + k, "missing key");
}

ExprPtr parse_entry(const json& j, const std::string& path, int dim) {
  if (!j.is_string()) fail(path, "expected an expression string");
  try {
    return parse_expr(j.get<std::string>(), dim);
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

ExprVec parse_vec(const json& j, const std::string& path, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(path, "expected " + std::to_string(dim) + " components");
  ExprVec v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(parse_entry(j[i], path + "[" + std::to_string(i) + "]", dim));
  return v;
}

ExprMat parse_matrix(const json& j, const std::string& path, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    fail(path, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  ExprMat a;
  for (std::size_t i = 0; i < j.size(); ++i)
    a.push_back(parse_vec(j[i], path + "[" + std::to_string(i) + "]", dim));
  return a;
}

void check_antisymmetric(const ExprMat& a, const CoordinateDomain& dom,
                         const std::string& path) {
  auto pts = sample_points(dom, 8, 42);
  for (const auto& p : pts) {
    Eigen::MatrixXd v = eval_at(a, p);
    if ((v + v.transpose()).cwiseAbs().maxCoeff() > 1e-9)
      fail(path, "matrix is not antisymmetric");
  }
}

void check_symmetric(const ExprMat& a, const CoordinateDomain& dom, const std::string& path) {
  auto pts = sample_points(dom, 8, 42);
  for (const auto& p : pts) {
    Eigen::MatrixXd v = eval_at(a, p);
    if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-9) fail(path, "matrix is not symmetric");
  }
}

CoordinateDomain parse_manifold(const json& j) {
  require_keys(j, "manifold", {"dim", "box", "periodic"}, {});
  CoordinateDomain d;
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
    fail("manifold.dim", "expected a positive integer");
  d.dim = j["dim"].get<int>();
  const json& box = j["box"];
  if (!box.is_array() || static_cast<int>(box.size()) != d.dim)
    fail("manifold.box", "expected one [lo, hi] pair per dimension");
  for (auto& iv : box) {
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      fail("manifold.box", "expected [lo, hi] pairs");
    d.box.emplace_back(iv[0].get<double>(), iv[1].get<double>());
    if (!(d.box.back().first < d.box.back().second))
      fail("manifold.box", "intervals need lo < hi");
  }
  const json& per = j["periodic"];
  if (!per.is_array() || static_cast<int>(per.size()) != d.dim)
    fail("manifold.periodic", "expected one flag per dimension");
  for (auto& f : per) {
    if (!f.is_boolean()) fail("manifold.periodic", "expected booleans");
    d.periodic.push_back(f.get<bool>());
  }
  return d;
}

json mat_to_json(const ExprMat& a) {
  json out = json::array();
  for (auto& row : a) {
    json r = json::array();
    for (auto& e : row) r.push_back(print_expr(e));
    out.push_back(r);
  }
  return out;
}

json vec_to_json(const ExprVec& v) {
  json out = json::array();
  for (auto& e : v) out.push_back(print_expr(e));
  return out;
}

}  // namespace

RunConfig parse_definition(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  require_keys(j, "$",
               {"manifold"},
               {"fields", "metric", "almost_contact", "sasaki", "graph", "checks", "samples",
                "seed", "tol"});

  RunConfig cfg;
  cfg.payload.dom = parse_manifold(j["manifold"]);
  const CoordinateDomain& dom = cfg.payload.dom;
  int m = dom.dim;

  if (j.contains("fields")) {
    const json& f = j["fields"];
    require_keys(f, "fields", {"A", "pi", "sigma"}, {});
    GeneralizedF s = zero_structure(dom);
    s.A = EndField{parse_matrix(f["A"], "fields.A", m)};
    s.pi = BivectorField{parse_matrix(f["pi"], "fields.pi", m)};
    s.sigma = TwoFormField{parse_matrix(f["sigma"], "fields.sigma", m)};
    check_antisymmetric(s.pi.c, dom, "fields.pi");
    check_antisymmetric(s.sigma.c, dom, "fields.sigma");
    cfg.payload.structure = std::move(s);
  }

  if (j.contains("metric")) {
    const json& g = j["metric"];
    require_keys(g, "metric", {"gamma"}, {"psi"});
    MetricField gamma{parse_matrix(g["gamma"], "metric.gamma", m)};
    check_symmetric(gamma.c, dom, "metric.gamma");
    TwoFormField psi{ezero_mat(m, m)};
    if (g.contains("psi")) {
      psi = TwoFormField{parse_matrix(g["psi"], "metric.psi", m)};
      check_antisymmetric(psi.c, dom, "metric.psi");
    }
    cfg.payload.metric = make_metric(std::move(gamma), std::move(psi), dom);
  }

  if (j.contains("almost_contact")) {
    const json& a = j["almost_contact"];
    require_keys(a, "almost_contact", {"P", "theta", "F", "Z", "xi"}, {});
    AlmostContact ac;
    ac.dom = dom;
    ac.P = BivectorField{parse_matrix(a["P"], "almost_contact.P", m)};
    ac.theta = TwoFormField{parse_matrix(a["theta"], "almost_contact.theta", m)};
    ac.F = EndField{parse_matrix(a["F"], "almost_contact.F", m)};
    check_antisymmetric(ac.P.c, dom, "almost_contact.P");
    check_antisymmetric(ac.theta.c, dom, "almost_contact.theta");
    if (!a["Z"].is_array() || !a["xi"].is_array() || a["Z"].size() != a["xi"].size())
      fail("almost_contact.Z", "Z and xi need one entry per codimension");
    for (std::size_t k = 0; k < a["Z"].size(); ++k) {
      ac.Z.push_back(
          VectorField{parse_vec(a["Z"][k], "almost_contact.Z[" + std::to_string(k) + "]", m)});
      ac.xi.push_back(OneFormField{
          parse_vec(a["xi"][k], "almost_contact.xi[" + std::to_string(k) + "]", m)});
    }
    cfg.payload.almost_contact = std::move(ac);
  }

  if (j.contains("sasaki")) {
    if (!cfg.payload.metric) fail("sasaki", "needs the metric payload for gamma and psi");
    const json& s = j["sasaki"];
    require_keys(s, "sasaki",
                 {"F_plus", "Z_plus", "xi_plus", "F_minus", "Z_minus", "xi_minus", "kappa"},
                 {});
    SasakiInput in;
    in.dom = dom;
    auto record = [&](const char* fk, const char* zk, const char* xk) {
      AlmostContactMetric acm;
      acm.dom = dom;
      acm.F = EndField{parse_matrix(s[fk], std::string("sasaki.") + fk, m)};
      acm.Z = VectorField{parse_vec(s[zk], std::string("sasaki.") + zk, m)};
      acm.xi = OneFormField{parse_vec(s[xk], std::string("sasaki.") + xk, m)};
      acm.gamma = cfg.payload.metric->gamma;
      return acm;
    };
    in.plus = record("F_plus", "Z_plus", "xi_plus");
    in.minus = record("F_minus", "Z_minus", "xi_minus");
    in.psi = cfg.payload.metric->psi;
    in.kappa = OneFormField{parse_vec(s["kappa"], "sasaki.kappa", m)};
    cfg.payload.sasaki = std::move(in);
  }

  if (j.contains("graph")) {
    const json& g = j["graph"];
    require_keys(g, "graph", {"V", "theta"}, {});
    GraphData gd;
    gd.dom = dom;
    if (!g["V"].is_array() || g["V"].empty()) fail("graph.V", "expected a nonempty array");
    for (std::size_t k = 0; k < g["V"].size(); ++k)
      gd.V.push_back(VectorField{parse_vec(g["V"][k], "graph.V[" + std::to_string(k) + "]", m)});
    gd.theta = TwoFormField{parse_matrix(g["theta"], "graph.theta", m)};
    check_antisymmetric(gd.theta.c, dom, "graph.theta");
    cfg.payload.graph = std::move(gd);
  }

  if (j.contains("checks")) {
    const json& c = j["checks"];
    if (!c.is_array()) fail("checks", "expected an array");
    for (std::size_t k = 0; k < c.size(); ++k) {
      const json& e = c[k];
      std::string path = "checks[" + std::to_string(k) + "]";
      CheckSpec spec;
      if (e.is_string()) {
        spec.name = e.get<std::string>();
      } else if (e.is_object()) {
        require_keys(e, path, {"name"}, {"B"});
        spec.name = e["name"].get<std::string>();
        if (e.contains("B")) {
          TwoFormField B{parse_matrix(e["B"], path + ".B", m)};
          check_antisymmetric(B.c, dom, path + ".B");
          spec.B = std::move(B);
        }
      } else {
        fail(path, "expected a check name or {name, B}");
      }
      bool known = false;
      for (auto& nm : known_check_names()) known = known || nm == spec.name;
      if (!known) fail(path, "unknown check name '" + spec.name + "'");
      cfg.checks.push_back(std::move(spec));
    }
  }

  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer() || j["samples"].get<int>() < 1)
      fail("samples", "expected an integer >= 1");
    cfg.samples = j["samples"].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      fail("seed", "expected an integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tol")) {
    if (!j["tol"].is_number() || !(j["tol"].get<double>() > 0))
      fail("tol", "expected a positive number");
    cfg.tol = j["tol"].get<double>();
  }
  return cfg;
}

RunConfig load_definition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_definition(ss.str());
}

std::string export_fixture(const Fixture& fx) {
  json j;
  const Payload& p = fx.payload;
  json manifold;
  manifold["dim"] = p.dom.dim;
  json box = json::array();
  for (auto& [lo, hi] : p.dom.box) box.push_back(json::array({lo, hi}));
  manifold["box"] = box;
  json per = json::array();
  for (bool b : p.dom.periodic) per.push_back(b);
  manifold["periodic"] = per;
  j["manifold"] = manifold;

  if (p.structure) {
    json f;
    f["A"] = mat_to_json(p.structure->A.c);
    f["pi"] = mat_to_json(p.structure->pi.c);
    f["sigma"] = mat_to_json(p.structure->sigma.c);
    j["fields"] = f;
  }
  if (p.metric) {
    json g;
    g["gamma"] = mat_to_json(p.metric->gamma.c);
    g["psi"] = mat_to_json(p.metric->psi.c);
    j["metric"] = g;
  }
  if (p.almost_contact) {
    json a;
    a["P"] = mat_to_json(p.almost_contact->P.c);
    a["theta"] = mat_to_json(p.almost_contact->theta.c);
    a["F"] = mat_to_json(p.almost_contact->F.c);
    json zs = json::array(), xs = json::array();
    for (auto& z : p.almost_contact->Z) zs.push_back(vec_to_json(z.c));
    for (auto& x : p.almost_contact->xi) xs.push_back(vec_to_json(x.c));
    a["Z"] = zs;
    a["xi"] = xs;
    j["almost_contact"] = a;
  }
  if (p.sasaki) {
    json s;
    s["F_plus"] = mat_to_json(p.sasaki->plus.F.c);
    s["Z_plus"] = vec_to_json(p.sasaki->plus.Z.c);
    s["xi_plus"] = vec_to_json(p.sasaki->plus.xi.c);
    s["F_minus"] = mat_to_json(p.sasaki->minus.F.c);
    s["Z_minus"] = vec_to_json(p.sasaki->minus.Z.c);
    s["xi_minus"] = vec_to_json(p.sasaki->minus.xi.c);
    s["kappa"] = vec_to_json(p.sasaki->kappa.c);
    j["sasaki"] = s;
  }
  if (p.graph) {
    json g;
    json vs = json::array();
    for (auto& v : p.graph->V) vs.push_back(vec_to_json(v.c));
    g["V"] = vs;
    g["theta"] = mat_to_json(p.graph->theta.c);
    j["graph"] = g;
  }
  json checks = json::array();
  for (auto& [name, _] : fx.expected) checks.push_back(name);
  j["checks"] = checks;
  j["samples"] = 200;
  j["seed"] = 42;
  j["tol"] = 1e-9;
  return j.dump(2) + "\n";
}

std::string render_text(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << std::left << std::setw(22) << "check" << std::setw(14) << "residual" << std::setw(8)
     << "verdict" << "worst point\n";
  bool all = true;
  for (const auto& r : reports) {
    std::ostringstream res;
    res << std::scientific << std::setprecision(3) << r.residual;
    os << std::left << std::setw(22) << r.name << std::setw(14) << res.str() << std::setw(8)
       << (r.pass ? "pass" : "FAIL");
    os << "(";
    for (std::size_t i = 0; i < r.worst.size(); ++i) {
      if (i) os << ", ";
      os << std::setprecision(4) << r.worst[i];
    }
    os << ")\n";
    all = all && r.pass;
  }
  os << (all ? "all checks passed\n" : "some checks FAILED\n");
  return os.str();
}

std::string render_json(const std::vector<CheckReport>& reports, bool timing) {
  json out = json::array();
  for (const auto& r : reports) {
    json e;
    e["check"] = r.name;
    e["residual"] = r.residual;
    json pt = json::array();
    for (double x : r.worst) pt.push_back(x);
    e["point"] = pt;
    e["pass"] = r.pass;
    e["millis"] = timing ? r.millis : 0.0;
    out.push_back(e);
  }
  return out.dump(2) + "\n";
}

}  // namespace crf
