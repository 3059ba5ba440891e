#include "rdlab/expr.hpp"

namespace rdlab {

namespace {
ExprPtr make(Expr::Op op, std::vector<ExprPtr> args, CD v = CD{}) {
    auto e = std::make_shared<Expr>();
    e->op = op;
    e->value = v;
    e->args = std::move(args);
    return e;
}
}  // namespace

ExprPtr Expr::constant(CD v) { return make(Op::Const, {}, v); }
ExprPtr Expr::var() { return make(Op::Var, {}); }
ExprPtr Expr::add(ExprPtr a, ExprPtr b) { return make(Op::Add, {std::move(a), std::move(b)}); }
ExprPtr Expr::sub(ExprPtr a, ExprPtr b) { return make(Op::Sub, {std::move(a), std::move(b)}); }
ExprPtr Expr::mul(ExprPtr a, ExprPtr b) { return make(Op::Mul, {std::move(a), std::move(b)}); }
ExprPtr Expr::div(ExprPtr a, ExprPtr b) { return make(Op::Div, {std::move(a), std::move(b)}); }
ExprPtr Expr::neg(ExprPtr a) { return make(Op::Neg, {std::move(a)}); }

ExprPtr Expr::horner(const PolyC& p) {
    if (p.is_zero()) return constant(CD(0, 0));
    const auto& c = p.coeffs();
    ExprPtr acc = constant(c.back());
    for (auto it = c.rbegin() + 1; it != c.rend(); ++it)
        acc = add(mul(acc, var()), constant(*it));
    return acc;
}

CD Expr::eval(CD y) const {
    switch (op) {
        case Op::Const: return value;
        case Op::Var: return y;
        case Op::Add: return args[0]->eval(y) + args[1]->eval(y);
        case Op::Sub: return args[0]->eval(y) - args[1]->eval(y);
        case Op::Mul: return args[0]->eval(y) * args[1]->eval(y);
        case Op::Div: return args[0]->eval(y) / args[1]->eval(y);
        case Op::Neg: return -args[0]->eval(y);
    }
    return CD(0, 0);
}

}  // namespace rdlab
