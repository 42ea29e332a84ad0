#pragma once

#include "crf/tensorcalc.hpp"

// Sections of the big tangent bundle TM (+) T*M: pairs (X, alpha) with the
// neutral pairing g((X,a),(Y,b)) = (a(Y) + b(X)) / 2 and the antisymmetrized
// Courant bracket
//   [(X,a),(Y,b)] = ([X,Y], L_X b - L_Y a + d(a(Y) - b(X)) / 2).
// Complex sections are (real, imaginary) pairs of real sections; every
// operation extends by complex bilinearity.

namespace crf {

struct BigField {
  VectorField X;
  OneFormField a;
  int dim() const { return X.dim(); }
};

struct CBigField {
  BigField re, im;
  int dim() const { return re.dim(); }
};

BigField big_zero(int m);
BigField big_basis(int m, int i);  // i < m: (e_i, 0); else (0, dx^{i-m})
CBigField complexify(const BigField& s);

BigField big_add(const BigField& A, const BigField& B);
BigField big_sub(const BigField& A, const BigField& B);
BigField big_scale(const ExprPtr& f, const BigField& A);

// component column (X^1..X^m, a_1..a_m) as expressions
ExprVec big_components(const BigField& A);
BigField big_from_components(const ExprVec& v);

// apply a 2m x 2m expression matrix to a section field
BigField big_apply(const ExprMat& M, const BigField& A);
CBigField big_apply(const ExprMat& re, const ExprMat& im, const CBigField& A);

ExprPtr pairing_g(const BigField& A, const BigField& B);
BigField courant_bracket(const BigField& A, const BigField& B);

CBigField big_add(const CBigField& A, const CBigField& B);
CBigField big_sub(const CBigField& A, const CBigField& B);
CBigField courant_bracket(const CBigField& A, const CBigField& B);

// X(g(B,C)) - g([A,B],C) - g(B,[A,C]) - (Z(g(A,B)) + Y(g(A,C))) / 2
// with Y, Z the vector parts of B, C; vanishes identically (axiom (v)).
ExprPtr axiom_v_residual(const BigField& A, const BigField& B, const BigField& C);

ExprPtr directional(const VectorField& x, const ExprPtr& f);  // X(f)

}  // namespace crf
