#pragma once

#include <optional>

#include "crf/bigbundle.hpp"
#include "crf/checks.hpp"

// Generalized F-structures Phi = (A, pi, sigma) acting on TM (+) T*M by
//   Phi(X, a) = (A X + sharp_pi a, flat_sigma X - tA a),
// subject to Phi^3 + Phi = 0 and skewness for the neutral pairing.

namespace crf {

struct StructureError : std::runtime_error {
  double residual;
  StructureError(const std::string& what, double r) : std::runtime_error(what), residual(r) {}
};

struct GeneralizedF {
  EndField A;
  BivectorField pi;
  TwoFormField sigma;
  CoordinateDomain dom;
  int m() const { return A.dim(); }
};

GeneralizedF zero_structure(const CoordinateDomain& dom);

// 2m x 2m block matrix [[A, sharp_pi], [flat_sigma, -tA]] and its square.
ExprMat phi_matrix(const GeneralizedF& s);
ExprMat phi_squared(const GeneralizedF& s);

GeneralizedF structure_from_phi_matrix(const ExprMat& phi, const CoordinateDomain& dom);

BigField apply_phi(const GeneralizedF& s, const BigField& A);
CBigField apply_phi(const GeneralizedF& s, const CBigField& A);

// --- pointwise eigenstructure -------------------------------------------------

struct EigenData {
  Eigen::MatrixXcd pr_E, pr_Ebar;
  Eigen::MatrixXd pr_S, pr_L;
  int rank_E = 0;    // k
  int dim_S = 0;     // 2(m-k)
  int neg_index = 0; // q, negative inertia of g restricted to S
};

EigenData eigen_data(const GeneralizedF& s, const Point& p, double rank_tol = 1e-8);

// max-norm residual of the pointwise projector algebra:
// idempotence, orthogonality, partition of unity, pr_L = -Phi^2 and the
// multiplication-by-i relation on E.
double projector_residual(const Eigen::MatrixXd& phi_at_p);

// rank/index triple at each point; throws StructureError if they fluctuate.
struct EigenSummary {
  int rank_E, dim_S, neg_index;
};
EigenSummary eigen_constancy(const GeneralizedF& s, const std::vector<Point>& pts,
                             double rank_tol = 1e-8);

// --- torsions ----------------------------------------------------------------

// Courant-Nijenhuis torsion [PA,PB] - P[PA,B] - P[A,PB] + P^2[A,B]
BigField nijenhuis_torsion(const GeneralizedF& s, const BigField& A, const BigField& B);

// tensorial concomitant [PA,PB] - [P2A,P2B] + P[PA,P2B] + P[P2A,PB]
BigField s_concomitant(const GeneralizedF& s, const BigField& A, const BigField& B);

// --- checks -------------------------------------------------------------------

// Phi^3 + Phi = 0 (max norm) together with the pairing-skewness residual.
CheckReport check_axioms(const GeneralizedF& s, const CheckConfig& cfg);

// S_Phi on coordinate basis sections (tensoriality makes these sufficient).
CheckReport check_integrability(const GeneralizedF& s, const CheckConfig& cfg);

// N_Phi(pr_L basis, pr_S basis); vanishes for every integrable structure.
CheckReport check_ls_torsion(const GeneralizedF& s, const CheckConfig& cfg);

// --- classical and skew-classical constructors --------------------------------

GeneralizedF from_classical_F(const EndField& F, const CoordinateDomain& dom);

// single non-skew-symmetric integrability condition for a classical
// F-structure, evaluated on coordinate vector pairs
CheckReport check_classical_crf(const EndField& F, const CoordinateDomain& dom,
                                const CheckConfig& cfg);

// Skew-classical structure from (V, sigma), sigma non-degenerate on V.
// Constant-coefficient inputs only: the musical inversion is done once,
// symbolically. Non-constant pairs are handled through graph_structures.
GeneralizedF from_V_sigma(const std::vector<VectorField>& V, const TwoFormField& sigma,
                          const CoordinateDomain& dom);
GeneralizedF from_Sigma_pi(const std::vector<OneFormField>& Sigma, const BivectorField& pi,
                           const CoordinateDomain& dom);

// --- generalized almost contact ------------------------------------------------

struct AlmostContact {
  BivectorField P;
  TwoFormField theta;
  EndField F;
  std::vector<VectorField> Z;
  std::vector<OneFormField> xi;
  CoordinateDomain dom;
  int codim() const { return static_cast<int>(Z.size()); }
};

// validates every defining identity (throws StructureError naming the first
// identity that fails) and packs Phi = (F, P, theta)
GeneralizedF from_almost_contact(const AlmostContact& ac, double tol = 1e-9);

// structure on the product with R^h: A' = F, pi' = P + sum Z_a ^ d/dt^a,
// sigma' = theta + sum xi^a ^ dt^a; the input is normal iff this lift is
// integrable
GeneralizedF lift_to_product(const AlmostContact& ac);

// complementary-frame residuals: normalization, orthogonality, Phi Z = 0 and
// the Phi^2 reconstruction identity
CheckReport check_complementary_frames(const GeneralizedF& s, const std::vector<BigField>& neg,
                                       const std::vector<BigField>& pos, const CheckConfig& cfg);

// --- transforms ----------------------------------------------------------------

GeneralizedF b_field(const GeneralizedF& s, const TwoFormField& B);

// --- graph structures (Example-style data) --------------------------------------

// Graph data: a subbundle spanned by V together with a 2-form. The structure
// is the graph of flat_theta restricted to span(V); its pairing-orthogonal
// complement is taken with the annihilator of span(V) itself.
struct GraphData {
  std::vector<VectorField> V;
  TwoFormField theta;
  CoordinateDomain dom;
};

struct GraphReport {
  CheckReport isotropy;     // identically zero; sanity
  CheckReport involutivity; // [V,V] subset V
  CheckReport dtheta;       // d theta(V,V,.) = 0
  bool pass() const { return isotropy.pass && involutivity.pass && dtheta.pass; }
};

GraphReport graph_structures(const GraphData& g, const CheckConfig& cfg);

// Dual graph data (Sigma, pi): integrability means Sigma is closed under the
// pi-bracket of 1-forms and the Schouten bracket of pi vanishes against Sigma.
struct DualGraphData {
  std::vector<OneFormField> Sigma;
  BivectorField pi;
  CoordinateDomain dom;
};

struct DualGraphReport {
  CheckReport isotropy;
  CheckReport closure;   // {Sigma, Sigma}_pi subset Sigma
  CheckReport schouten;  // [pi,pi](Sigma, Sigma, .) = 0
  bool pass() const { return isotropy.pass && closure.pass && schouten.pass; }
};

DualGraphReport graph_structures_dual(const DualGraphData& g, const CheckConfig& cfg);

}  // namespace crf
