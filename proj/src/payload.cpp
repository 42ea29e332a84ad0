#include "crf/payload.hpp"

namespace crf {

namespace {

const GeneralizedF& need_structure(const Payload& p, const std::string& check) {
  if (!p.structure) throw InputError("check '" + check + "' needs a fields payload");
  return *p.structure;
}

const GeneralizedMetric& need_metric(const Payload& p, const std::string& check) {
  if (!p.metric) throw InputError("check '" + check + "' needs a metric payload");
  return *p.metric;
}

MetricQuadruple induced_quadruple(const Payload& p, const std::string& check) {
  const GeneralizedMetric& G = need_metric(p, check);
  const GeneralizedF& s = need_structure(p, check);
  auto [fp, fm] = induced_F_pm(G, s);
  return MetricQuadruple{G.gamma, G.psi, fp, fm, G.dom};
}

AlmostContactMetric acm_of(const Payload& p, const std::string& check) {
  if (!p.almost_contact) throw InputError("check '" + check + "' needs an almost_contact payload");
  const GeneralizedMetric& G = need_metric(p, check);
  const AlmostContact& ac = *p.almost_contact;
  if (ac.codim() != 1) throw InputError("check '" + check + "' needs codimension 1");
  AlmostContactMetric acm{ac.F, ac.Z[0], ac.xi[0], G.gamma, p.dom};
  return acm;
}

CheckReport classical_crf_of(const Payload& p, const CheckConfig& cfg) {
  EndField F{ezero_mat(p.dom.dim, p.dom.dim)};
  if (p.structure) {
    auto pts = sample_points(p.dom, 8, 42);
    for (const auto& pt : pts) {
      double r = std::max(eval_at(p.structure->pi.c, pt).cwiseAbs().maxCoeff(),
                          eval_at(p.structure->sigma.c, pt).cwiseAbs().maxCoeff());
      if (r > 1e-12)
        throw InputError("check 'classical-crf' needs a classical payload (pi = sigma = 0)");
    }
    F = p.structure->A;
  } else if (p.almost_contact) {
    F = p.almost_contact->F;
  } else {
    throw InputError("check 'classical-crf' needs a fields or almost_contact payload");
  }
  return check_classical_crf(F, p.dom, cfg);
}

CheckReport frames_check(const Payload& p, const CheckConfig& cfg) {
  if (!p.almost_contact) throw InputError("check 'frames' needs an almost_contact payload");
  const AlmostContact& ac = *p.almost_contact;
  GeneralizedF s = from_almost_contact(ac);
  std::vector<BigField> neg, pos;
  int m = p.dom.dim;
  for (int a = 0; a < ac.codim(); ++a) {
    pos.push_back(BigField{ac.Z[a], ac.xi[a]});
    OneFormField nxi{ezero_vec(m)};
    for (int i = 0; i < m; ++i) nxi.c[i] = crf::neg(ac.xi[a].c[i]);
    neg.push_back(BigField{ac.Z[a], nxi});
  }
  return check_complementary_frames(s, neg, pos, cfg);
}

CheckReport crfk_all(const Payload& p, const CheckConfig& cfg) {
  const GeneralizedMetric& G = need_metric(p, "crfk");
  const GeneralizedF& s = need_structure(p, "crfk");
  MetricQuadruple q = induced_quadruple(p, "crfk");
  CheckReport nabla = check_crfk_nabla(q, cfg);
  CheckReport lie = check_crfk_lie(q, cfg);
  CheckReport closure = check_bracket_closure(G, s, cfg);
  if (nabla.pass != lie.pass || lie.pass != closure.pass)
    throw StructureError("CRFK formulations disagree (nabla=" +
                             std::to_string(nabla.pass) + " lie=" + std::to_string(lie.pass) +
                             " closure=" + std::to_string(closure.pass) + ")",
                         std::max({nabla.residual, lie.residual, closure.residual}));
  CheckReport merged = merge_reports("crfk", {nabla, lie, closure});
  return merged;
}

CheckReport sasakian_check(const Payload& p, const CheckConfig& cfg) {
  if (!p.sasaki) throw InputError("check 'sasakian' needs a sasaki payload");
  CheckReport direct = check_generalized_sasakian(*p.sasaki, cfg);
  MetricQuadruple q = sasakian_product_quadruple(*p.sasaki);
  CheckReport product = check_gualtieri_kahler(q, cfg);
  if (direct.pass != product.pass)
    throw StructureError("sasakian direct and product formulations disagree",
                         std::max(direct.residual, product.residual));
  direct.name = "sasakian";
  return direct;
}

CheckReport graph_merged(const Payload& p, const std::string& name, const CheckConfig& cfg) {
  GraphReport rep = graph_structures(*p.graph, cfg);
  if (name == "axioms") {
    CheckReport r = rep.isotropy;
    r.name = "axioms";
    return r;
  }
  CheckReport merged = merge_reports(name, {rep.isotropy, rep.involutivity, rep.dtheta});
  return merged;
}

}  // namespace

const std::vector<std::string>& known_check_names() {
  static const std::vector<std::string> names = {
      "axioms",        "integrability",      "ls-torsion",   "classical-crf",
      "frames",        "metric-axioms",      "metric-compat", "quadruple-roundtrip",
      "crfk",          "gualtieri",          "partial-kahler", "cosymplectic",
      "sasakian",      "bfield"};
  return names;
}

CheckReport run_check(const Payload& p, const CheckSpec& spec, const CheckConfig& cfg) {
  const std::string& n = spec.name;
  if (n == "axioms") {
    if (p.graph) return graph_merged(p, "axioms", cfg);
    if (p.almost_contact && !p.structure)
      return check_axioms(from_almost_contact(*p.almost_contact), cfg);
    return check_axioms(need_structure(p, n), cfg);
  }
  if (n == "integrability") {
    if (p.graph) return graph_merged(p, "integrability", cfg);
    if (p.almost_contact && !p.structure)
      return check_integrability(from_almost_contact(*p.almost_contact), cfg);
    return check_integrability(need_structure(p, n), cfg);
  }
  if (n == "ls-torsion") return check_ls_torsion(need_structure(p, n), cfg);
  if (n == "classical-crf") return classical_crf_of(p, cfg);
  if (n == "frames") return frames_check(p, cfg);
  if (n == "metric-axioms") return check_metric_axioms(need_metric(p, n), cfg);
  if (n == "metric-compat") {
    auto rep = check_compatibility(need_metric(p, n), need_structure(p, n), cfg);
    if (!rep.agree())
      throw StructureError("compatibility formulations disagree",
                           std::max(rep.commutation.residual, rep.classical_form.residual));
    return merge_reports("metric-compat", {rep.commutation, rep.classical_form});
  }
  if (n == "quadruple-roundtrip")
    return check_phi_roundtrip(need_metric(p, n), need_structure(p, n), cfg);
  if (n == "crfk") return crfk_all(p, cfg);
  if (n == "gualtieri") return check_gualtieri_kahler(induced_quadruple(p, n), cfg);
  if (n == "partial-kahler") return check_partial_kahler(induced_quadruple(p, n), cfg);
  if (n == "cosymplectic") return check_cosymplectic(acm_of(p, n), cfg);
  if (n == "sasakian") return sasakian_check(p, cfg);
  if (n == "bfield") {
    if (!spec.B) throw InputError("check 'bfield' needs a B matrix");
    GeneralizedF tr = b_field(need_structure(p, n), *spec.B);
    CheckReport ax = check_axioms(tr, cfg);
    CheckReport in = check_integrability(tr, cfg);
    return merge_reports("bfield", {ax, in});
  }
  throw InputError("unknown check name '" + n + "'");
}

}  // namespace crf
