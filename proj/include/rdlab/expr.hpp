#pragma once

#include <memory>
#include <vector>

#include "rdlab/poly.hpp"

namespace rdlab {

// Rational-expression tree in one variable (the root of the next tower
// stage).  Only the field operations appear, so serialized recipes can be
// replayed by any consumer.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Op { Const, Var, Add, Sub, Mul, Div, Neg };

    Op op;
    CD value{};                 // Const
    std::vector<ExprPtr> args;  // binary ops / Neg

    static ExprPtr constant(CD v);
    static ExprPtr var();
    static ExprPtr add(ExprPtr a, ExprPtr b);
    static ExprPtr sub(ExprPtr a, ExprPtr b);
    static ExprPtr mul(ExprPtr a, ExprPtr b);
    static ExprPtr div(ExprPtr a, ExprPtr b);
    static ExprPtr neg(ExprPtr a);

    // Horner form of p evaluated at the variable
    static ExprPtr horner(const PolyC& p);

    CD eval(CD y) const;
};

}  // namespace rdlab
