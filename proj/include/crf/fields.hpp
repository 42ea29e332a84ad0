#pragma once

#include <Eigen/Dense>

#include <unordered_map>

#include "crf/domain.hpp"
#include "crf/expr.hpp"

// Coordinate tensor fields with closed-form components, and expression-level
// matrix algebra. Index conventions used throughout:
//   VectorField   c[i]      = X^i
//   OneFormField  c[i]      = alpha_i
//   TwoFormField  c[i][j]   = sigma(e_i, e_j)          (antisymmetric)
//   BivectorField c[i][j]   = pi(dx^i, dx^j)           (antisymmetric)
//   EndField      c[i][j]   = (F e_j)^i                (mixed tensor A^i_j)
//   MetricField   c[i][j]   = gamma(e_i, e_j)          (symmetric, pos. def.)
// Musical maps: flat_sigma X = i(X)sigma (first-slot contraction) and
// sharp_pi alpha = i(alpha)pi, i.e. <sharp_pi alpha, beta> = pi(alpha, beta).

namespace crf {

using ExprVec = std::vector<ExprPtr>;
using ExprMat = std::vector<ExprVec>;

struct VectorField {
  ExprVec c;
  int dim() const { return static_cast<int>(c.size()); }
};
struct OneFormField {
  ExprVec c;
  int dim() const { return static_cast<int>(c.size()); }
};
struct TwoFormField {
  ExprMat c;
  int dim() const { return static_cast<int>(c.size()); }
};
struct BivectorField {
  ExprMat c;
  int dim() const { return static_cast<int>(c.size()); }
};
struct EndField {
  ExprMat c;
  int dim() const { return static_cast<int>(c.size()); }
};
struct MetricField {
  ExprMat c;
  int dim() const { return static_cast<int>(c.size()); }
};
struct ThreeFormField {
  std::vector<std::vector<ExprVec>> c;  // c[i][j][k], fully antisymmetric
  int dim() const { return static_cast<int>(c.size()); }
};
using TriVectorField = ThreeFormField;  // contravariant, same storage

// --- construction helpers ---------------------------------------------------

ExprVec ezero_vec(int m);
ExprMat ezero_mat(int r, int c);
ExprMat eidentity(int m);
ExprMat from_values(const std::vector<std::vector<double>>& v);

VectorField basis_vector(int m, int i);          // e_i (0-based i)
OneFormField basis_oneform(int m, int i);        // dx^i
TwoFormField wedge_forms(const OneFormField& a, const OneFormField& b);  // a ^ b
ThreeFormField zero_threeform(int m);

// --- expression matrix algebra ----------------------------------------------

ExprMat emul(const ExprMat& a, const ExprMat& b);
ExprMat eadd(const ExprMat& a, const ExprMat& b);
ExprMat esub(const ExprMat& a, const ExprMat& b);
ExprMat escale(const ExprPtr& s, const ExprMat& a);
ExprMat escale(double s, const ExprMat& a);
ExprMat etranspose(const ExprMat& a);
ExprVec eapply(const ExprMat& a, const ExprVec& v);
ExprPtr edot(const ExprVec& a, const ExprVec& b);
ExprVec evec_add(const ExprVec& a, const ExprVec& b);
ExprVec evec_sub(const ExprVec& a, const ExprVec& b);

// Symbolic inverse by adjugate over a memoized minor expansion. Intended for
// the desk scales of this project (m <= 8); entries become rational
// expressions sharing the determinant subtree.
ExprMat einverse(const ExprMat& a);
ExprPtr edet(const ExprMat& a);

// Matrices of the musical maps, acting on component columns:
//   sharp_mat(pi)[i][j]    = pi^{ji}   ((sharp_pi a)^i = pi^{ji} a_j)
//   flat_mat(sigma)[i][j]  = sigma_{ji} ((flat_sigma X)_i = X^j sigma_{ji})
ExprMat sharp_mat(const BivectorField& pi);
ExprMat flat_mat(const TwoFormField& sigma);
ExprMat flat_mat(const MetricField& g);   // = g (symmetric)
ExprMat sharp_mat(const MetricField& g);  // = g^{-1}

// Extract tensor components back out of musical matrices.
BivectorField bivector_from_sharp(const ExprMat& sharp);  // pi^{ij} = sharp[j][i]
TwoFormField twoform_from_flat(const ExprMat& flat);      // s_{ij} = flat[j][i]

// --- pointwise numeric evaluation --------------------------------------------

double eval_at(const ExprPtr& e, const Point& p);
Eigen::VectorXd eval_at(const ExprVec& v, const Point& p);
Eigen::MatrixXd eval_at(const ExprMat& a, const Point& p);

// Per-point evaluation cache: shared subtrees across the many component
// expressions of one check are evaluated once. Not thread-safe; use one
// context per point per thread.
class EvalContext {
 public:
  explicit EvalContext(const Point& p) : pt_(p) {}
  double value(const ExprPtr& e);
  Eigen::VectorXd value(const ExprVec& v);
  Eigen::MatrixXd value(const ExprMat& a);
  const Point& point() const { return pt_; }

 private:
  const Point& pt_;
  std::unordered_map<const Expr*, double> memo_;
};

// --- parsing whole tensors ---------------------------------------------------

VectorField parse_vector(const std::vector<std::string>& comps, int dim, int factors = 0);
OneFormField parse_oneform(const std::vector<std::string>& comps, int dim, int factors = 0);
ExprMat parse_mat(const std::vector<std::vector<std::string>>& rows, int dim, int factors = 0);

bool mat_is_constant(const ExprMat& a);

}  // namespace crf
