#pragma once

#include "crf/fields.hpp"

// Classical operators on coordinate tensor fields.
//
// Factor conventions, fixed once for the whole project (see also the
// Conventions section of the README):
//   (a ^ b)(X,Y)    = a(X) b(Y) - a(Y) b(X)
//   d xi (X,Y)      = X(xi(Y)) - Y(xi(X)) - xi([X,Y])
//   d th (X,Y,Z)    = sum_cyc X(th(Y,Z)) - sum_cyc th([X,Y],Z)
// with no 1/2 or 1/3 factors anywhere. In coordinates:
//   (d xi)_{ij}     = d_i xi_j - d_j xi_i
//   (d th)_{ijk}    = d_i th_{jk} + d_j th_{ki} + d_k th_{ij}
// The Schouten bracket convention is pinned by
//   [P,P](df,dg,dh) = 2 * Jacobiator_P(f,g,h),  {f,g} = P(df,dg).

namespace crf {

// [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i
VectorField lie_bracket(const VectorField& x, const VectorField& y);

// exterior derivatives
OneFormField d_scalar(const ExprPtr& f, int m);
TwoFormField d_oneform(const OneFormField& a);
ThreeFormField d_twoform(const TwoFormField& t);

// Lie derivatives along X of a 1-form and of a covariant 2-tensor
// (two-forms and metrics share the same component formula).
OneFormField lie_oneform(const VectorField& x, const OneFormField& a);
ExprMat lie_cov2(const VectorField& x, const ExprMat& t);

// interior products, contraction in the first slot
ExprPtr pair_form_vector(const OneFormField& a, const VectorField& x);  // a(X)
OneFormField interior_two(const VectorField& x, const TwoFormField& t);
TwoFormField interior_three(const VectorField& x, const ThreeFormField& t);

// musical maps as field operations
OneFormField flat_apply(const TwoFormField& s, const VectorField& x);   // i(X)s
VectorField sharp_apply(const BivectorField& p, const OneFormField& a);  // i(a)P

// Schouten-Nijenhuis bracket of two bivector fields (a trivector field).
TriVectorField schouten_bracket(const BivectorField& p, const BivectorField& q);

// bracket of 1-forms attached to a bivector:
// {a,b}_P = L_{sharp_P a} b - L_{sharp_P b} a - d(P(a,b))
OneFormField one_form_P_bracket(const OneFormField& a, const OneFormField& b,
                                const BivectorField& p);

ExprPtr eval_two(const TwoFormField& t, const VectorField& x, const VectorField& y);
ExprPtr eval_bivector(const BivectorField& p, const OneFormField& a, const OneFormField& b);
ExprPtr eval_metric(const MetricField& g, const VectorField& x, const VectorField& y);
ExprPtr eval_three(const ThreeFormField& t, const VectorField& x, const VectorField& y,
                   const VectorField& z);

// Levi-Civita connection of a metric.
struct Connection {
  ExprMat inverse_metric;               // gamma^{ij}
  std::vector<ExprMat> christoffel;     // christoffel[k][i][j] = Gamma^k_{ij}
  int dim() const { return static_cast<int>(christoffel.size()); }
};
Connection levi_civita(const MetricField& g);

// (nabla_{e_k} X)^i = d_k X^i + Gamma^i_{kl} X^l
VectorField covariant_derivative_vec(const Connection& c, int k, const VectorField& x);

// nabla F for an endomorphism field: out[k][i][j] = ((nabla_{e_k} F) e_j)^i
std::vector<ExprMat> covariant_derivative_end(const Connection& c, const EndField& f);

// covariant 2-tensor: out[k][i][j] = (nabla_{e_k} g)_{ij}; identically 0 for
// the metric that produced the connection (used as a residual check).
std::vector<ExprMat> covariant_derivative_cov2(const Connection& c, const ExprMat& g);

}  // namespace crf
