#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Closed-form scalar expressions over local coordinates.
//
// Expressions are immutable trees (shared subtrees allowed, so really DAGs)
// built once and evaluated at many points, possibly from several threads at
// the same time. Differentiation is symbolic and closed: the partial of an
// expression is again an expression.
//
// Grammar accepted by parse():
//   identifiers x1..x9, x10, ... (coordinates), t1..t9 (product factors);
//   decimal literals; operators + - * / ^ (integer exponent), unary -;
//   functions sin cos tan exp log sqrt; constants PI, E; parentheses.

namespace crf {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class Op : std::uint8_t {
  Const,
  Coord,  // 1-based coordinate index
  Neg,
  Sin,
  Cos,
  Tan,
  Exp,
  Log,
  Sqrt,
  Add,
  Sub,
  Mul,
  Div,
  Pow,  // integer exponent only
};

struct Expr {
  Op op = Op::Const;
  double cval = 0.0;
  int coord = 0;
  int expo = 1;
  ExprPtr a, b;
};

// Thrown when evaluation hits a singularity (1/0, log of a non-positive
// value, sqrt of a negative value, non-finite result). Carries the printed
// offending subexpression.
struct EvalError : std::runtime_error {
  std::string subexpr;
  EvalError(const std::string& what, std::string sub)
      : std::runtime_error(what + " in subexpression: " + sub), subexpr(std::move(sub)) {}
};

struct ParseError : std::runtime_error {
  std::size_t pos;
  ParseError(const std::string& what, std::size_t p)
      : std::runtime_error(what + " at position " + std::to_string(p)), pos(p) {}
};

// Node constructors. All perform value-preserving constant folding only.
ExprPtr lit(double v);
ExprPtr coord(int index);  // 1-based
ExprPtr neg(ExprPtr e);
ExprPtr sin_e(ExprPtr e);
ExprPtr cos_e(ExprPtr e);
ExprPtr tan_e(ExprPtr e);
ExprPtr exp_e(ExprPtr e);
ExprPtr log_e(ExprPtr e);
ExprPtr sqrt_e(ExprPtr e);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div_e(ExprPtr a, ExprPtr b);
ExprPtr powi(ExprPtr a, int k);

inline ExprPtr operator+(ExprPtr a, ExprPtr b) { return add(std::move(a), std::move(b)); }
inline ExprPtr operator-(ExprPtr a, ExprPtr b) { return sub(std::move(a), std::move(b)); }
inline ExprPtr operator*(ExprPtr a, ExprPtr b) { return mul(std::move(a), std::move(b)); }
inline ExprPtr operator/(ExprPtr a, ExprPtr b) { return div_e(std::move(a), std::move(b)); }
inline ExprPtr operator-(ExprPtr a) { return neg(std::move(a)); }

bool is_zero(const ExprPtr& e);
bool is_const(const ExprPtr& e);

// Exact symbolic partial derivative with respect to coordinate i (1-based).
ExprPtr partial(const ExprPtr& e, int i);

// Plain recursive evaluation; throws EvalError at singular points.
double eval(const ExprPtr& e, std::span<const double> pt);

// First-order jet: value plus one partial per coordinate, computed by
// forward-mode propagation (independent of partial()).
struct Jet1 {
  double value = 0.0;
  std::vector<double> gradient;
};
Jet1 eval_jet(const ExprPtr& e, std::span<const double> pt);

// parse / print. `dim` bounds the x-indices; `factors` many t-coordinates
// follow them (tk maps to coordinate dim + k, so the total dimension seen by
// eval is dim + factors). print() renders indices above x_dim as t's.
ExprPtr parse_expr(const std::string& src, int dim, int factors = 0);
std::string print_expr(const ExprPtr& e, int x_dim = 0);  // 0: everything is an x

}  // namespace crf
