#pragma once

#include "crf/genstruct.hpp"

// Generalized Riemannian metrics G = (gamma, psi) acting on TM (+) T*M by
//   sharp_G = [[phi, sharp_gamma], [flat_beta, tphi]],
// phi = -sharp_gamma o flat_psi, flat_beta = flat_gamma o (Id - phi^2),
// together with the compatible-structure layer: induced classical pairs
// (F+, F-), the quadruple correspondence and the CRFK criteria.

namespace crf {

struct GeneralizedMetric {
  MetricField gamma;
  TwoFormField psi;
  CoordinateDomain dom;
  // derived, built once
  ExprMat inv_gamma;  // sharp_gamma
  ExprMat phi;        // -sharp_gamma flat_psi
  ExprMat flat_beta;  // flat_gamma (Id - phi^2)
  ExprMat sharp_G;    // 2m x 2m
  int m() const { return gamma.dim(); }
};

GeneralizedMetric make_metric(MetricField gamma, TwoFormField psi, CoordinateDomain dom);

struct MetricQuadruple {
  MetricField gamma;
  TwoFormField psi;
  EndField Fp, Fm;
  CoordinateDomain dom;
  int m() const { return gamma.dim(); }
};

// throws StructureError unless F+- satisfy the cubic identity and
// gamma-skewness at probe points
void validate_quadruple(const MetricQuadruple& q, double tol = 1e-8);

BigField sharp_G_apply(const GeneralizedMetric& G, const BigField& A);

// the (+-1)-eigensection (X, flat_{psi +- gamma} X) of sharp_G
BigField v_pm_lift(const GeneralizedMetric& G, const VectorField& X, int sign);

// sharp_G^2 = Id, pairing isometry, positivity of gamma / beta / G, V+-
// orthogonality and G = +-2g on V+-.
CheckReport check_metric_axioms(const GeneralizedMetric& G, const CheckConfig& cfg);

// compatibility of (G, Phi): commutation sharp_G Phi = Phi sharp_G, checked
// independently against the classical two-condition form; the two verdicts
// agree on every valid pair.
struct CompatibilityReport {
  CheckReport commutation;
  CheckReport classical_form;
  bool agree() const { return commutation.pass == classical_form.pass; }
  bool pass() const { return commutation.pass && classical_form.pass; }
};
CompatibilityReport check_compatibility(const GeneralizedMetric& G, const GeneralizedF& s,
                                        const CheckConfig& cfg);

// F_{+-} = A + sharp_pi o flat_{psi +- gamma}; throws StructureError if the
// induced maps violate the cubic identity (upstream incompatibility).
std::pair<EndField, EndField> induced_F_pm(const GeneralizedMetric& G, const GeneralizedF& s);

// quadruple -> structure: sharp_pi = (F+ - F-) sharp_gamma / 2,
// A = [F+ (Id - sharp_gamma flat_psi) + F- (Id + sharp_gamma flat_psi)] / 2,
// flat_sigma = flat_gamma (A phi - phi A + sharp_pi flat_beta).
GeneralizedF reconstruct_phi(const MetricQuadruple& q);

GeneralizedMetric metric_of(const MetricQuadruple& q);

// complementary structure Phi^c = sharp_G o Phi
GeneralizedF complementary_structure(const GeneralizedMetric& G, const GeneralizedF& s);

// round trip induced_F_pm(reconstruct_phi(q)) = (F+, F-) as a residual scan
CheckReport check_quadruple_roundtrip(const MetricQuadruple& q, const CheckConfig& cfg);

// the other composition: reconstruct_phi(induced_F_pm(G, s)) = s
CheckReport check_phi_roundtrip(const GeneralizedMetric& G, const GeneralizedF& s,
                                const CheckConfig& cfg);

// --- CRFK formulations ----------------------------------------------------------

// connection form: classical CRF for F+- plus
// gamma(F X, (nabla_Z F) Y) = -+ [dpsi(F^2 X, Y, Z) + dpsi(F X, F Y, Z)] / 2
CheckReport check_crfk_nabla(const MetricQuadruple& q, const CheckConfig& cfg);

// Lie form: classical CRF for F+- plus i(X ^ Y) dpsi = +- (i(X) L_Y gamma -
// L_X i(Y) gamma) on spectral-projector arguments
CheckReport check_crfk_lie(const MetricQuadruple& q, const CheckConfig& cfg);

// Courant-bracket closure of E+-, S+- plus [S+, S-] in S
CheckReport check_bracket_closure(const GeneralizedMetric& G, const GeneralizedF& s,
                                  const CheckConfig& cfg);

// the [S+, S-] in S condition alone; check_bracket_closure passes iff the
// structure and its complement are integrable and this passes
CheckReport check_spsm(const GeneralizedMetric& G, const GeneralizedF& s,
                       const CheckConfig& cfg);

// S = 0 specialization: dpsi(X,Y,Z) = +- d omega_{+-}(J X, J Y, J Z);
// throws StructureError unless F^2 = -Id at probe points
CheckReport check_gualtieri_kahler(const MetricQuadruple& q, const CheckConfig& cfg);

// dpsi = 0 specialization: gamma(F X, (nabla_Z F) Y) = 0 and the projector
// onto Q+- is parallel; throws StructureError if dpsi != 0
CheckReport check_partial_kahler(const MetricQuadruple& q, const CheckConfig& cfg);

}  // namespace crf
