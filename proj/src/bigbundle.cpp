#include "crf/bigbundle.hpp"

namespace crf {

BigField big_zero(int m) { return {VectorField{ezero_vec(m)}, OneFormField{ezero_vec(m)}}; }

BigField big_basis(int m, int i) {
  BigField s = big_zero(m);
  if (i < m)
    s.X.c[i] = lit(1);
  else
    s.a.c[i - m] = lit(1);
  return s;
}

CBigField complexify(const BigField& s) { return {s, big_zero(s.dim())}; }

BigField big_add(const BigField& A, const BigField& B) {
  int m = A.dim();
  BigField out = big_zero(m);
  for (int i = 0; i < m; ++i) {
    out.X.c[i] = add(A.X.c[i], B.X.c[i]);
    out.a.c[i] = add(A.a.c[i], B.a.c[i]);
  }
  return out;
}

BigField big_sub(const BigField& A, const BigField& B) {
  int m = A.dim();
  BigField out = big_zero(m);
  for (int i = 0; i < m; ++i) {
    out.X.c[i] = sub(A.X.c[i], B.X.c[i]);
    out.a.c[i] = sub(A.a.c[i], B.a.c[i]);
  }
  return out;
}

BigField big_scale(const ExprPtr& f, const BigField& A) {
  int m = A.dim();
  BigField out = big_zero(m);
  for (int i = 0; i < m; ++i) {
    out.X.c[i] = mul(f, A.X.c[i]);
    out.a.c[i] = mul(f, A.a.c[i]);
  }
  return out;
}

ExprVec big_components(const BigField& A) {
  ExprVec v = A.X.c;
  v.insert(v.end(), A.a.c.begin(), A.a.c.end());
  return v;
}

BigField big_from_components(const ExprVec& v) {
  int m = static_cast<int>(v.size()) / 2;
  BigField out = big_zero(m);
  for (int i = 0; i < m; ++i) {
    out.X.c[i] = v[i];
    out.a.c[i] = v[m + i];
  }
  return out;
}

BigField big_apply(const ExprMat& M, const BigField& A) {
  return big_from_components(eapply(M, big_components(A)));
}

CBigField big_apply(const ExprMat& re, const ExprMat& im, const CBigField& A) {
  BigField rr = big_apply(re, A.re);
  BigField ri = big_apply(re, A.im);
  BigField ir = big_apply(im, A.re);
  BigField ii = big_apply(im, A.im);
  return {big_sub(rr, ii), big_add(ri, ir)};
}

ExprPtr pairing_g(const BigField& A, const BigField& B) {
  return mul(lit(0.5), add(pair_form_vector(A.a, B.X), pair_form_vector(B.a, A.X)));
}

ExprPtr directional(const VectorField& x, const ExprPtr& f) {
  ExprPtr s = lit(0);
  for (int i = 0; i < x.dim(); ++i) s = add(s, mul(x.c[i], partial(f, i + 1)));
  return s;
}

BigField courant_bracket(const BigField& A, const BigField& B) {
  int m = A.dim();
  BigField out = big_zero(m);
  out.X = lie_bracket(A.X, B.X);
  OneFormField la = lie_oneform(A.X, B.a);
  OneFormField lb = lie_oneform(B.X, A.a);
  ExprPtr f = sub(pair_form_vector(A.a, B.X), pair_form_vector(B.a, A.X));
  OneFormField df = d_scalar(f, m);
  for (int i = 0; i < m; ++i)
    out.a.c[i] = add(sub(la.c[i], lb.c[i]), mul(lit(0.5), df.c[i]));
  return out;
}

CBigField big_add(const CBigField& A, const CBigField& B) {
  return {big_add(A.re, B.re), big_add(A.im, B.im)};
}

CBigField big_sub(const CBigField& A, const CBigField& B) {
  return {big_sub(A.re, B.re), big_sub(A.im, B.im)};
}

CBigField courant_bracket(const CBigField& A, const CBigField& B) {
  BigField rr = courant_bracket(A.re, B.re);
  BigField ii = courant_bracket(A.im, B.im);
  BigField ri = courant_bracket(A.re, B.im);
  BigField ir = courant_bracket(A.im, B.re);
  return {big_sub(rr, ii), big_add(ri, ir)};
}

ExprPtr axiom_v_residual(const BigField& A, const BigField& B, const BigField& C) {
  BigField ab = courant_bracket(A, B);
  BigField ac = courant_bracket(A, C);
  ExprPtr lhs = directional(A.X, pairing_g(B, C));
  ExprPtr rhs = add(pairing_g(ab, C), pairing_g(B, ac));
  rhs = add(rhs, mul(lit(0.5), add(directional(C.X, pairing_g(A, B)),
                                   directional(B.X, pairing_g(A, C)))));
  return sub(lhs, rhs);
}

}  // namespace crf
