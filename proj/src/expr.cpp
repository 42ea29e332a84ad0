#include "crf/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace crf {

namespace {

ExprPtr make(Op op, double cval = 0, int coord = 0, int expo = 1, ExprPtr a = nullptr,
             ExprPtr b = nullptr) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->cval = cval;
  e->coord = coord;
  e->expo = expo;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

double cv(const ExprPtr& e) { return e->cval; }

}  // namespace

bool is_const(const ExprPtr& e) { return e->op == Op::Const; }
bool is_zero(const ExprPtr& e) { return e->op == Op::Const && e->cval == 0.0; }
static bool is_one(const ExprPtr& e) { return e->op == Op::Const && e->cval == 1.0; }

ExprPtr lit(double v) { return make(Op::Const, v); }

ExprPtr coord(int index) {
  if (index < 1) throw std::invalid_argument("coordinate index must be >= 1");
  return make(Op::Coord, 0, index);
}

ExprPtr neg(ExprPtr e) {
  if (is_const(e)) return lit(-cv(e));
  if (e->op == Op::Neg) return e->a;
  return make(Op::Neg, 0, 0, 1, std::move(e));
}

ExprPtr sin_e(ExprPtr e) { return is_const(e) ? lit(std::sin(cv(e))) : make(Op::Sin, 0, 0, 1, std::move(e)); }
ExprPtr cos_e(ExprPtr e) { return is_const(e) ? lit(std::cos(cv(e))) : make(Op::Cos, 0, 0, 1, std::move(e)); }
ExprPtr tan_e(ExprPtr e) { return is_const(e) ? lit(std::tan(cv(e))) : make(Op::Tan, 0, 0, 1, std::move(e)); }
ExprPtr exp_e(ExprPtr e) { return is_const(e) ? lit(std::exp(cv(e))) : make(Op::Exp, 0, 0, 1, std::move(e)); }

ExprPtr log_e(ExprPtr e) {
  if (is_const(e) && cv(e) > 0) return lit(std::log(cv(e)));
  return make(Op::Log, 0, 0, 1, std::move(e));
}

ExprPtr sqrt_e(ExprPtr e) {
  if (is_const(e) && cv(e) >= 0) return lit(std::sqrt(cv(e)));
  return make(Op::Sqrt, 0, 0, 1, std::move(e));
}

ExprPtr add(ExprPtr a, ExprPtr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (is_const(a) && is_const(b)) return lit(cv(a) + cv(b));
  return make(Op::Add, 0, 0, 1, std::move(a), std::move(b));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
  if (is_zero(b)) return a;
  if (is_zero(a)) return neg(std::move(b));
  if (is_const(a) && is_const(b)) return lit(cv(a) - cv(b));
  return make(Op::Sub, 0, 0, 1, std::move(a), std::move(b));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
  if (is_zero(a) || is_zero(b)) return lit(0);
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  if (is_const(a) && is_const(b)) return lit(cv(a) * cv(b));
  return make(Op::Mul, 0, 0, 1, std::move(a), std::move(b));
}

ExprPtr div_e(ExprPtr a, ExprPtr b) {
  if (is_one(b)) return a;
  if (is_zero(a) && !is_zero(b)) return lit(0);
  if (is_const(a) && is_const(b) && cv(b) != 0) return lit(cv(a) / cv(b));
  return make(Op::Div, 0, 0, 1, std::move(a), std::move(b));
}

ExprPtr powi(ExprPtr a, int k) {
  if (k == 0) return lit(1);
  if (k == 1) return a;
  if (is_const(a)) return lit(std::pow(cv(a), k));
  return make(Op::Pow, 0, 0, k, std::move(a));
}

ExprPtr partial(const ExprPtr& e, int i) {
  switch (e->op) {
    case Op::Const: return lit(0);
    case Op::Coord: return lit(e->coord == i ? 1 : 0);
    case Op::Neg: return neg(partial(e->a, i));
    case Op::Sin: return mul(cos_e(e->a), partial(e->a, i));
    case Op::Cos: return neg(mul(sin_e(e->a), partial(e->a, i)));
    case Op::Tan: {
      // d tan u = (1 + tan^2 u) du
      auto t = tan_e(e->a);
      return mul(add(lit(1), mul(t, t)), partial(e->a, i));
    }
    case Op::Exp: return mul(exp_e(e->a), partial(e->a, i));
    case Op::Log: return div_e(partial(e->a, i), e->a);
    case Op::Sqrt: return div_e(partial(e->a, i), mul(lit(2), sqrt_e(e->a)));
    case Op::Add: return add(partial(e->a, i), partial(e->b, i));
    case Op::Sub: return sub(partial(e->a, i), partial(e->b, i));
    case Op::Mul: return add(mul(partial(e->a, i), e->b), mul(e->a, partial(e->b, i)));
    case Op::Div:
      return div_e(sub(mul(partial(e->a, i), e->b), mul(e->a, partial(e->b, i))),
                   mul(e->b, e->b));
    case Op::Pow:
      return mul(mul(lit(e->expo), powi(e->a, e->expo - 1)), partial(e->a, i));
  }
  throw std::logic_error("unreachable");
}

namespace {

[[noreturn]] void eval_fail(const char* what, const ExprPtr& e) {
  throw EvalError(what, print_expr(e));
}

double check_finite(double v, const ExprPtr& e) {
  if (!std::isfinite(v)) eval_fail("non-finite value", e);
  return v;
}

}  // namespace

double eval(const ExprPtr& e, std::span<const double> pt) {
  switch (e->op) {
    case Op::Const: return e->cval;
    case Op::Coord:
      if (e->coord > static_cast<int>(pt.size())) eval_fail("coordinate index out of range", e);
      return pt[e->coord - 1];
    case Op::Neg: return -eval(e->a, pt);
    case Op::Sin: return std::sin(eval(e->a, pt));
    case Op::Cos: return std::cos(eval(e->a, pt));
    case Op::Tan: return check_finite(std::tan(eval(e->a, pt)), e);
    case Op::Exp: return check_finite(std::exp(eval(e->a, pt)), e);
    case Op::Log: {
      double v = eval(e->a, pt);
      if (v <= 0) eval_fail("log of non-positive value", e);
      return std::log(v);
    }
    case Op::Sqrt: {
      double v = eval(e->a, pt);
      if (v < 0) eval_fail("sqrt of negative value", e);
      return std::sqrt(v);
    }
    case Op::Add: return eval(e->a, pt) + eval(e->b, pt);
    case Op::Sub: return eval(e->a, pt) - eval(e->b, pt);
    case Op::Mul: return eval(e->a, pt) * eval(e->b, pt);
    case Op::Div: {
      double d = eval(e->b, pt);
      if (d == 0) eval_fail("division by zero", e);
      return check_finite(eval(e->a, pt) / d, e);
    }
    case Op::Pow: return check_finite(std::pow(eval(e->a, pt), e->expo), e);
  }
  throw std::logic_error("unreachable");
}

namespace {

struct JetVal {
  double v;
  std::vector<double> g;
};

JetVal jet(const ExprPtr& e, std::span<const double> pt) {
  const std::size_t m = pt.size();
  auto zero = [m] { return std::vector<double>(m, 0.0); };
  switch (e->op) {
    case Op::Const: return {e->cval, zero()};
    case Op::Coord: {
      if (e->coord > static_cast<int>(m)) eval_fail("coordinate index out of range", e);
      auto g = zero();
      g[e->coord - 1] = 1;
      return {pt[e->coord - 1], g};
    }
    default: break;
  }
  JetVal x = jet(e->a, pt);
  auto chain = [&](double v, double dv) {
    JetVal r{check_finite(v, e), std::move(x.g)};
    for (auto& gi : r.g) gi *= dv;
    return r;
  };
  switch (e->op) {
    case Op::Neg: return chain(-x.v, -1);
    case Op::Sin: return chain(std::sin(x.v), std::cos(x.v));
    case Op::Cos: return chain(std::cos(x.v), -std::sin(x.v));
    case Op::Tan: {
      double t = std::tan(x.v);
      return chain(t, 1 + t * t);
    }
    case Op::Exp: {
      double v = std::exp(x.v);
      return chain(v, v);
    }
    case Op::Log:
      if (x.v <= 0) eval_fail("log of non-positive value", e);
      return chain(std::log(x.v), 1 / x.v);
    case Op::Sqrt: {
      if (x.v < 0) eval_fail("sqrt of negative value", e);
      double s = std::sqrt(x.v);
      if (s == 0) eval_fail("derivative of sqrt at zero", e);
      return chain(s, 0.5 / s);
    }
    case Op::Pow:
      return chain(std::pow(x.v, e->expo), e->expo * std::pow(x.v, e->expo - 1));
    default: break;
  }
  JetVal y = jet(e->b, pt);
  JetVal r{0, zero()};
  switch (e->op) {
    case Op::Add:
      r.v = x.v + y.v;
      for (std::size_t i = 0; i < m; ++i) r.g[i] = x.g[i] + y.g[i];
      return r;
    case Op::Sub:
      r.v = x.v - y.v;
      for (std::size_t i = 0; i < m; ++i) r.g[i] = x.g[i] - y.g[i];
      return r;
    case Op::Mul:
      r.v = x.v * y.v;
      for (std::size_t i = 0; i < m; ++i) r.g[i] = x.g[i] * y.v + x.v * y.g[i];
      return r;
    case Op::Div:
      if (y.v == 0) eval_fail("division by zero", e);
      r.v = check_finite(x.v / y.v, e);
      for (std::size_t i = 0; i < m; ++i) r.g[i] = (x.g[i] - r.v * y.g[i]) / y.v;
      return r;
    default: break;
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Jet1 eval_jet(const ExprPtr& e, std::span<const double> pt) {
  JetVal j = jet(e, pt);
  return Jet1{j.v, std::move(j.g)};
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;
  int dim;
  int factors;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip();
    return pos < s.size() ? s[pos] : '\0';
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+'))
        e = add(e, term());
      else if (eat('-'))
        e = sub(e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (eat('*'))
        e = mul(e, factor());
      else if (eat('/'))
        e = div_e(e, factor());
      else
        return e;
    }
  }

  ExprPtr factor() {
    if (eat('-')) return neg(factor());
    ExprPtr e = base();
    if (eat('^')) {
      bool negexp = eat('-');
      skip();
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) throw ParseError("expected integer exponent", start);
      int k = std::stoi(s.substr(start, pos - start));
      e = powi(e, negexp ? -k : k);
    }
    return e;
  }

  ExprPtr base() {
    skip();
    if (pos >= s.size()) throw ParseError("unexpected end of input", pos);
    char c = s[pos];
    if (c == '(') {
      ++pos;
      ExprPtr e = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos);
  }

  ExprPtr number() {
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' || s[pos] == 'e' ||
            s[pos] == 'E' ||
            ((s[pos] == '+' || s[pos] == '-') && (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
      ++pos;
    double v = 0;
    auto [p, ec] = std::from_chars(s.data() + start, s.data() + pos, v);
    if (ec != std::errc{}) throw ParseError("bad numeric literal", start);
    pos = start + static_cast<std::size_t>(p - (s.data() + start));
    return lit(v);
  }

  ExprPtr ident() {
    std::size_t start = pos;
    while (pos < s.size() && std::isalnum(static_cast<unsigned char>(s[pos]))) ++pos;
    std::string name = s.substr(start, pos - start);
    if (name == "PI") return lit(3.14159265358979323846);
    if (name == "E") return lit(2.71828182845904523536);
    if (name == "sin" || name == "cos" || name == "tan" || name == "exp" || name == "log" ||
        name == "sqrt") {
      if (!eat('(')) throw ParseError("expected '(' after function name", pos);
      ExprPtr arg = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos);
      if (name == "sin") return sin_e(arg);
      if (name == "cos") return cos_e(arg);
      if (name == "tan") return tan_e(arg);
      if (name == "exp") return exp_e(arg);
      if (name == "log") return log_e(arg);
      return sqrt_e(arg);
    }
    if ((name[0] == 'x' || name[0] == 't') && name.size() > 1 &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      int k = std::stoi(name.substr(1));
      if (k < 1) throw ParseError("coordinate index must be positive", start);
      if (name[0] == 'x') {
        if (k > dim) throw ParseError("coordinate index out of range: " + name, start);
        return coord(k);
      }
      if (k > factors) throw ParseError("product-factor index out of range: " + name, start);
      return coord(dim + k);
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }
};

}  // namespace

ExprPtr parse_expr(const std::string& src, int dim, int factors) {
  Parser p{src, 0, dim, factors};
  ExprPtr e = p.expr();
  p.skip();
  if (p.pos != src.size()) throw ParseError("trailing input", p.pos);
  return e;
}

namespace {

// precedence: Add/Sub 1, Mul/Div 2, unary 3, Pow 4, atom 5
int prec(const Expr& e) {
  switch (e.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

void print_rec(std::ostream& os, const ExprPtr& e, int parent_prec, int x_dim) {
  int p = prec(*e);
  bool parens = p < parent_prec;
  if (parens) os << '(';
  switch (e->op) {
    case Op::Const: {
      if (e->cval < 0) {
        // keep unary minus explicit so reparsing is unambiguous
        os << '-';
        std::ostringstream tmp;
        tmp.precision(17);
        tmp << -e->cval;
        os << tmp.str();
      } else {
        std::ostringstream tmp;
        tmp.precision(17);
        tmp << e->cval;
        os << tmp.str();
      }
      break;
    }
    case Op::Coord:
      if (x_dim > 0 && e->coord > x_dim)
        os << 't' << (e->coord - x_dim);
      else
        os << 'x' << e->coord;
      break;
    case Op::Neg:
      os << '-';
      print_rec(os, e->a, 4, x_dim);
      break;
    case Op::Sin:
    case Op::Cos:
    case Op::Tan:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt: {
      const char* n = e->op == Op::Sin   ? "sin"
                      : e->op == Op::Cos ? "cos"
                      : e->op == Op::Tan ? "tan"
                      : e->op == Op::Exp ? "exp"
                      : e->op == Op::Log ? "log"
                                         : "sqrt";
      os << n << '(';
      print_rec(os, e->a, 0, x_dim);
      os << ')';
      break;
    }
    case Op::Add:
      print_rec(os, e->a, 1, x_dim);
      os << '+';
      print_rec(os, e->b, 2, x_dim);
      break;
    case Op::Sub:
      print_rec(os, e->a, 1, x_dim);
      os << '-';
      print_rec(os, e->b, 2, x_dim);
      break;
    case Op::Mul:
      print_rec(os, e->a, 2, x_dim);
      os << '*';
      print_rec(os, e->b, 3, x_dim);
      break;
    case Op::Div:
      print_rec(os, e->a, 2, x_dim);
      os << '/';
      print_rec(os, e->b, 3, x_dim);
      break;
    case Op::Pow:
      print_rec(os, e->a, 5, x_dim);
      os << '^';
      if (e->expo < 0) os << '-';
      os << std::abs(e->expo);
      break;
  }
  if (parens) os << ')';
}

}  // namespace

std::string print_expr(const ExprPtr& e, int x_dim) {
  std::ostringstream os;
  print_rec(os, e, 0, x_dim);
  return os.str();
}

}  // namespace crf
