#include "crf/tensorcalc.hpp"

namespace crf {

VectorField lie_bracket(const VectorField& x, const VectorField& y) {
  int m = x.dim();
  VectorField out{ezero_vec(m)};
  for (int i = 0; i < m; ++i) {
    ExprPtr s = lit(0);
    for (int j = 0; j < m; ++j)
      s = add(s, sub(mul(x.c[j], partial(y.c[i], j + 1)), mul(y.c[j], partial(x.c[i], j + 1))));
    out.c[i] = s;
  }
  return out;
}

OneFormField d_scalar(const ExprPtr& f, int m) {
  OneFormField out{ezero_vec(m)};
  for (int i = 0; i < m; ++i) out.c[i] = partial(f, i + 1);
  return out;
}

TwoFormField d_oneform(const OneFormField& a) {
  int m = a.dim();
  TwoFormField out{ezero_mat(m, m)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out.c[i][j] = sub(partial(a.c[j], i + 1), partial(a.c[i], j + 1));
  return out;
}

ThreeFormField d_twoform(const TwoFormField& t) {
  int m = t.dim();
  ThreeFormField out = zero_threeform(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        out.c[i][j][k] = add(add(partial(t.c[j][k], i + 1), partial(t.c[k][i], j + 1)),
                             partial(t.c[i][j], k + 1));
  return out;
}

OneFormField lie_oneform(const VectorField& x, const OneFormField& a) {
  int m = x.dim();
  OneFormField out{ezero_vec(m)};
  for (int i = 0; i < m; ++i) {
    ExprPtr s = lit(0);
    for (int j = 0; j < m; ++j)
      s = add(s, add(mul(x.c[j], partial(a.c[i], j + 1)), mul(a.c[j], partial(x.c[j], i + 1))));
    out.c[i] = s;
  }
  return out;
}

ExprMat lie_cov2(const VectorField& x, const ExprMat& t) {
  int m = x.dim();
  ExprMat out = ezero_mat(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      ExprPtr s = lit(0);
      for (int k = 0; k < m; ++k) {
        s = add(s, mul(x.c[k], partial(t[i][j], k + 1)));
        s = add(s, mul(t[k][j], partial(x.c[k], i + 1)));
        s = add(s, mul(t[i][k], partial(x.c[k], j + 1)));
      }
      out[i][j] = s;
    }
  return out;
}

ExprPtr pair_form_vector(const OneFormField& a, const VectorField& x) { return edot(a.c, x.c); }

OneFormField interior_two(const VectorField& x, const TwoFormField& t) {
  int m = x.dim();
  OneFormField out{ezero_vec(m)};
  for (int j = 0; j < m; ++j) {
    ExprPtr s = lit(0);
    for (int i = 0; i < m; ++i) s = add(s, mul(x.c[i], t.c[i][j]));
    out.c[j] = s;
  }
  return out;
}

TwoFormField interior_three(const VectorField& x, const ThreeFormField& t) {
  int m = x.dim();
  TwoFormField out{ezero_mat(m, m)};
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      ExprPtr s = lit(0);
      for (int i = 0; i < m; ++i) s = add(s, mul(x.c[i], t.c[i][j][k]));
      out.c[j][k] = s;
    }
  return out;
}

OneFormField flat_apply(const TwoFormField& s, const VectorField& x) {
  return interior_two(x, s);
}

VectorField sharp_apply(const BivectorField& p, const OneFormField& a) {
  int m = p.dim();
  VectorField out{ezero_vec(m)};
  for (int j = 0; j < m; ++j) {
    ExprPtr s = lit(0);
    for (int i = 0; i < m; ++i) s = add(s, mul(a.c[i], p.c[i][j]));
    out.c[j] = s;
  }
  return out;
}

TriVectorField schouten_bracket(const BivectorField& p, const BivectorField& q) {
  int m = p.dim();
  TriVectorField out = zero_threeform(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        ExprPtr s = lit(0);
        // sum over cyclic permutations of (i,j,k)
        int idx[3][3] = {{i, j, k}, {j, k, i}, {k, i, j}};
        for (auto& perm : idx) {
          int a = perm[0], b = perm[1], c = perm[2];
          for (int l = 0; l < m; ++l) {
            s = add(s, mul(p.c[a][l], partial(q.c[b][c], l + 1)));
            s = add(s, mul(q.c[a][l], partial(p.c[b][c], l + 1)));
          }
        }
        out.c[i][j][k] = s;
      }
  return out;
}

OneFormField one_form_P_bracket(const OneFormField& a, const OneFormField& b,
                                const BivectorField& p) {
  int m = p.dim();
  VectorField pa = sharp_apply(p, a);
  VectorField pb = sharp_apply(p, b);
  OneFormField la = lie_oneform(pa, b);
  OneFormField lb = lie_oneform(pb, a);
  ExprPtr pab = eval_bivector(p, a, b);
  OneFormField dpab = d_scalar(pab, m);
  OneFormField out{ezero_vec(m)};
  for (int i = 0; i < m; ++i) out.c[i] = sub(sub(la.c[i], lb.c[i]), dpab.c[i]);
  return out;
}

ExprPtr eval_two(const TwoFormField& t, const VectorField& x, const VectorField& y) {
  int m = t.dim();
  ExprPtr s = lit(0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s = add(s, mul(mul(x.c[i], y.c[j]), t.c[i][j]));
  return s;
}

ExprPtr eval_bivector(const BivectorField& p, const OneFormField& a, const OneFormField& b) {
  int m = p.dim();
  ExprPtr s = lit(0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s = add(s, mul(mul(a.c[i], b.c[j]), p.c[i][j]));
  return s;
}

ExprPtr eval_metric(const MetricField& g, const VectorField& x, const VectorField& y) {
  int m = g.dim();
  ExprPtr s = lit(0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s = add(s, mul(mul(x.c[i], y.c[j]), g.c[i][j]));
  return s;
}

ExprPtr eval_three(const ThreeFormField& t, const VectorField& x, const VectorField& y,
                   const VectorField& z) {
  int m = t.dim();
  ExprPtr s = lit(0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        s = add(s, mul(mul(mul(x.c[i], y.c[j]), z.c[k]), t.c[i][j][k]));
  return s;
}

Connection levi_civita(const MetricField& g) {
  int m = g.dim();
  Connection conn;
  conn.inverse_metric = einverse(g.c);
  conn.christoffel.assign(m, ezero_mat(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        ExprPtr s = lit(0);
        for (int l = 0; l < m; ++l) {
          ExprPtr bracket = sub(add(partial(g.c[l][j], i + 1), partial(g.c[l][i], j + 1)),
                                partial(g.c[i][j], l + 1));
          s = add(s, mul(conn.inverse_metric[k][l], bracket));
        }
        conn.christoffel[k][i][j] = mul(lit(0.5), s);
      }
  return conn;
}

VectorField covariant_derivative_vec(const Connection& c, int k, const VectorField& x) {
  int m = x.dim();
  VectorField out{ezero_vec(m)};
  for (int i = 0; i < m; ++i) {
    ExprPtr s = partial(x.c[i], k + 1);
    for (int l = 0; l < m; ++l) s = add(s, mul(c.christoffel[i][k][l], x.c[l]));
    out.c[i] = s;
  }
  return out;
}

std::vector<ExprMat> covariant_derivative_end(const Connection& c, const EndField& f) {
  int m = f.dim();
  std::vector<ExprMat> out(m, ezero_mat(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        ExprPtr s = partial(f.c[i][j], k + 1);
        for (int l = 0; l < m; ++l) {
          s = add(s, mul(c.christoffel[i][k][l], f.c[l][j]));
          s = sub(s, mul(c.christoffel[l][k][j], f.c[i][l]));
        }
        out[k][i][j] = s;
      }
  return out;
}

std::vector<ExprMat> covariant_derivative_cov2(const Connection& c, const ExprMat& g) {
  int m = static_cast<int>(g.size());
  std::vector<ExprMat> out(m, ezero_mat(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        ExprPtr s = partial(g[i][j], k + 1);
        for (int l = 0; l < m; ++l) {
          s = sub(s, mul(c.christoffel[l][k][i], g[l][j]));
          s = sub(s, mul(c.christoffel[l][k][j], g[i][l]));
        }
        out[k][i][j] = s;
      }
  return out;
}

}  // namespace crf
