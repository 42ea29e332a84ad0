#include "crf/fields.hpp"

#include <unordered_map>

namespace crf {

ExprVec ezero_vec(int m) { return ExprVec(m, lit(0)); }

ExprMat ezero_mat(int r, int c) { return ExprMat(r, ExprVec(c, lit(0))); }

ExprMat eidentity(int m) {
  ExprMat a = ezero_mat(m, m);
  for (int i = 0; i < m; ++i) a[i][i] = lit(1);
  return a;
}

ExprMat from_values(const std::vector<std::vector<double>>& v) {
  ExprMat a(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (double x : v[i]) a[i].push_back(lit(x));
  return a;
}

VectorField basis_vector(int m, int i) {
  VectorField x{ezero_vec(m)};
  x.c[i] = lit(1);
  return x;
}

OneFormField basis_oneform(int m, int i) {
  OneFormField a{ezero_vec(m)};
  a.c[i] = lit(1);
  return a;
}

TwoFormField wedge_forms(const OneFormField& a, const OneFormField& b) {
  int m = a.dim();
  TwoFormField w{ezero_mat(m, m)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) w.c[i][j] = sub(mul(a.c[i], b.c[j]), mul(a.c[j], b.c[i]));
  return w;
}

ThreeFormField zero_threeform(int m) {
  ThreeFormField t;
  t.c.assign(m, std::vector<ExprVec>(m, ExprVec(m, lit(0))));
  return t;
}

ExprMat emul(const ExprMat& a, const ExprMat& b) {
  int r = static_cast<int>(a.size());
  int k = static_cast<int>(b.size());
  int c = static_cast<int>(b[0].size());
  ExprMat out = ezero_mat(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      ExprPtr s = lit(0);
      for (int l = 0; l < k; ++l) s = add(s, mul(a[i][l], b[l][j]));
      out[i][j] = s;
    }
  return out;
}

ExprMat eadd(const ExprMat& a, const ExprMat& b) {
  ExprMat out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] = add(a[i][j], b[i][j]);
  return out;
}

ExprMat esub(const ExprMat& a, const ExprMat& b) {
  ExprMat out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] = sub(a[i][j], b[i][j]);
  return out;
}

ExprMat escale(const ExprPtr& s, const ExprMat& a) {
  ExprMat out = a;
  for (auto& row : out)
    for (auto& e : row) e = mul(s, e);
  return out;
}

ExprMat escale(double s, const ExprMat& a) { return escale(lit(s), a); }

ExprMat etranspose(const ExprMat& a) {
  int r = static_cast<int>(a.size());
  int c = static_cast<int>(a[0].size());
  ExprMat out = ezero_mat(c, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out[j][i] = a[i][j];
  return out;
}

ExprVec eapply(const ExprMat& a, const ExprVec& v) {
  int r = static_cast<int>(a.size());
  int c = static_cast<int>(a[0].size());
  ExprVec out = ezero_vec(r);
  for (int i = 0; i < r; ++i) {
    ExprPtr s = lit(0);
    for (int j = 0; j < c; ++j) s = add(s, mul(a[i][j], v[j]));
    out[i] = s;
  }
  return out;
}

ExprPtr edot(const ExprVec& a, const ExprVec& b) {
  ExprPtr s = lit(0);
  for (std::size_t i = 0; i < a.size(); ++i) s = add(s, mul(a[i], b[i]));
  return s;
}

ExprVec evec_add(const ExprVec& a, const ExprVec& b) {
  ExprVec out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = add(a[i], b[i]);
  return out;
}

ExprVec evec_sub(const ExprVec& a, const ExprVec& b) {
  ExprVec out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = sub(a[i], b[i]);
  return out;
}

namespace {

// Determinant of the submatrix made of rows `row..m-1` and the columns in the
// bit set `cols`, memoized so the adjugate shares minors as a DAG.
struct MinorTable {
  const ExprMat& a;
  int m;
  std::unordered_map<std::uint64_t, ExprPtr> memo;

  ExprPtr det(int row, std::uint32_t cols) {
    if (row == m) return lit(1);
    std::uint64_t key = (static_cast<std::uint64_t>(row) << 32) | cols;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    ExprPtr s = lit(0);
    int sign = 1;
    for (int j = 0; j < m; ++j) {
      if (!(cols & (1u << j))) continue;
      ExprPtr term = mul(a[row][j], det(row + 1, cols & ~(1u << j)));
      s = sign > 0 ? add(s, term) : sub(s, term);
      sign = -sign;
    }
    memo[key] = s;
    return s;
  }
};

}  // namespace

ExprPtr edet(const ExprMat& a) {
  int m = static_cast<int>(a.size());
  MinorTable t{a, m, {}};
  return t.det(0, (1u << m) - 1);
}

ExprMat einverse(const ExprMat& a) {
  int m = static_cast<int>(a.size());
  ExprPtr d = edet(a);
  if (is_zero(d)) throw std::invalid_argument("singular expression matrix");
  ExprMat inv = ezero_mat(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      // cofactor C_{ji}: delete row j, column i
      ExprMat sub_m;
      sub_m.reserve(m - 1);
      for (int r = 0; r < m; ++r) {
        if (r == j) continue;
        ExprVec row;
        row.reserve(m - 1);
        for (int c = 0; c < m; ++c)
          if (c != i) row.push_back(a[r][c]);
        sub_m.push_back(std::move(row));
      }
      ExprPtr cof = m == 1 ? lit(1) : edet(sub_m);
      if ((i + j) % 2 == 1) cof = neg(cof);
      inv[i][j] = div_e(cof, d);
    }
  return inv;
}

ExprMat sharp_mat(const BivectorField& pi) { return etranspose(pi.c); }

ExprMat flat_mat(const TwoFormField& sigma) { return etranspose(sigma.c); }

ExprMat flat_mat(const MetricField& g) { return g.c; }

ExprMat sharp_mat(const MetricField& g) { return einverse(g.c); }

BivectorField bivector_from_sharp(const ExprMat& sharp) { return {etranspose(sharp)}; }

TwoFormField twoform_from_flat(const ExprMat& flat) { return {etranspose(flat)}; }

double eval_at(const ExprPtr& e, const Point& p) { return eval(e, p); }

Eigen::VectorXd eval_at(const ExprVec& v, const Point& p) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = eval(v[i], p);
  return out;
}

Eigen::MatrixXd eval_at(const ExprMat& a, const Point& p) {
  Eigen::MatrixXd out(a.size(), a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval(a[i][j], p);
  return out;
}

double EvalContext::value(const ExprPtr& e) {
  if (e->op == Op::Const) return e->cval;
  auto it = memo_.find(e.get());
  if (it != memo_.end()) return it->second;
  double v;
  switch (e->op) {
    case Op::Coord:
      if (e->coord > static_cast<int>(pt_.size()))
        throw EvalError("coordinate index out of range", print_expr(e));
      v = pt_[e->coord - 1];
      break;
    case Op::Neg: v = -value(e->a); break;
    case Op::Sin: v = std::sin(value(e->a)); break;
    case Op::Cos: v = std::cos(value(e->a)); break;
    case Op::Tan: v = std::tan(value(e->a)); break;
    case Op::Exp: v = std::exp(value(e->a)); break;
    case Op::Log: {
      double x = value(e->a);
      if (x <= 0) throw EvalError("log of non-positive value", print_expr(e));
      v = std::log(x);
      break;
    }
    case Op::Sqrt: {
      double x = value(e->a);
      if (x < 0) throw EvalError("sqrt of negative value", print_expr(e));
      v = std::sqrt(x);
      break;
    }
    case Op::Add: v = value(e->a) + value(e->b); break;
    case Op::Sub: v = value(e->a) - value(e->b); break;
    case Op::Mul: v = value(e->a) * value(e->b); break;
    case Op::Div: {
      double d = value(e->b);
      if (d == 0) throw EvalError("division by zero", print_expr(e));
      v = value(e->a) / d;
      break;
    }
    case Op::Pow: v = std::pow(value(e->a), e->expo); break;
    default: throw std::logic_error("unreachable");
  }
  if (!std::isfinite(v)) throw EvalError("non-finite value", print_expr(e));
  memo_.emplace(e.get(), v);
  return v;
}

Eigen::VectorXd EvalContext::value(const ExprVec& v) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = value(v[i]);
  return out;
}

Eigen::MatrixXd EvalContext::value(const ExprMat& a) {
  Eigen::MatrixXd out(a.size(), a[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value(a[i][j]);
  return out;
}

VectorField parse_vector(const std::vector<std::string>& comps, int dim, int factors) {
  VectorField v;
  for (auto& s : comps) v.c.push_back(parse_expr(s, dim, factors));
  return v;
}

OneFormField parse_oneform(const std::vector<std::string>& comps, int dim, int factors) {
  OneFormField v;
  for (auto& s : comps) v.c.push_back(parse_expr(s, dim, factors));
  return v;
}

ExprMat parse_mat(const std::vector<std::vector<std::string>>& rows, int dim, int factors) {
  ExprMat a;
  for (auto& row : rows) {
    ExprVec r;
    for (auto& s : row) r.push_back(parse_expr(s, dim, factors));
    a.push_back(std::move(r));
  }
  return a;
}

bool mat_is_constant(const ExprMat& a) {
  for (auto& row : a)
    for (auto& e : row)
      if (!is_const(e)) return false;
  return true;
}

}  // namespace crf
