// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/ast.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace iwe {

namespace {

Expr make(ExprKind kind, std::vector<Expr> args) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->args = std::move(args);
    return n;
}

const Rational& cval(const Expr& e) { return e->value; }

// Exponents above this are left symbolic rather than folded.
constexpr unsigned long max_folded_exponent = 1UL << 14;

} // namespace

bool is_const(const Expr& e) { return e && e->kind == ExprKind::Const; }

namespace ex {

Expr constant(const Rational& v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Const;
    n->value = v;
    return n;
}

Expr constant(long v) { return constant(Rational(v)); }

Expr var(const std::string& name) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Var;
    n->name = name;
    return n;
}

Expr inf() { return make(ExprKind::Inf, {}); }

Expr neg(Expr a) {
    if (is_const(a)) {
        return constant(Rational(-cval(a)));
    }
    return make(ExprKind::Neg, {std::move(a)});
}

Expr add(Expr a, Expr b) {
    if (is_const(a) && is_const(b)) {
        return constant(Rational(cval(a) + cval(b)));
    }
    return make(ExprKind::Add, {std::move(a), std::move(b)});
}

Expr sub(Expr a, Expr b) {
    if (is_const(a) && is_const(b)) {
        return constant(Rational(cval(a) - cval(b)));
    }
    return make(ExprKind::Sub, {std::move(a), std::move(b)});
}

Expr mul(Expr a, Expr b) {
    if (is_const(a) && is_const(b)) {
        return constant(Rational(cval(a) * cval(b)));
    }
    return make(ExprKind::Mul, {std::move(a), std::move(b)});
}

Expr div(Expr a, Expr b) {
    if (is_const(a) && is_const(b) && cval(b) != 0) {
        return constant(Rational(cval(a) / cval(b)));
    }
    return make(ExprKind::Div, {std::move(a), std::move(b)});
}

Expr mod(Expr a, Expr b) {
    if (is_const(a) && is_const(b) && is_integer(cval(a)) && is_integer(cval(b)) && cval(b) != 0) {
        return constant(Rational(floor_mod(cval(a).get_num(), cval(b).get_num())));
    }
    return make(ExprKind::Mod, {std::move(a), std::move(b)});
}

Expr pow(Expr base, Expr exponent) {
    if (is_const(base) && is_const(exponent) && is_integer(cval(exponent)) && cval(exponent) >= 0 &&
        cval(exponent) <= max_folded_exponent) {
        const unsigned long k = cval(exponent).get_num().get_ui();
        Rational r;
        mpz_pow_ui(r.get_num_mpz_t(), cval(base).get_num_mpz_t(), k);
        mpz_pow_ui(r.get_den_mpz_t(), cval(base).get_den_mpz_t(), k);
        r.canonicalize();
        return constant(r);
    }
    return make(ExprKind::Pow, {std::move(base), std::move(exponent)});
}

Expr abs(Expr a) {
    if (is_const(a)) {
        return constant(iwe::abs(cval(a)));
    }
    return make(ExprKind::Abs, {std::move(a)});
}

Expr sign(Expr a) {
    if (is_const(a)) {
        return constant(static_cast<long>(iwe::sign(cval(a))));
    }
    return make(ExprKind::Sign, {std::move(a)});
}

Expr min(Expr a, Expr b) {
    if (is_const(a) && is_const(b)) {
        return constant(std::min(cval(a), cval(b)));
    }
    return make(ExprKind::Min, {std::move(a), std::move(b)});
}

Expr max(Expr a, Expr b) {
    if (is_const(a) && is_const(b)) {
        return constant(std::max(cval(a), cval(b)));
    }
    return make(ExprKind::Max, {std::move(a), std::move(b)});
}

Expr indicator(Pred p) {
    if (p->kind == PredKind::True) {
        return constant(1);
    }
    if (p->kind == PredKind::False) {
        return constant(0);
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Indicator;
    n->pred = std::move(p);
    return n;
}

Expr sum(const std::string& index, Expr lo, Expr hi, Expr body) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Sum;
    n->name = index;
    n->args = {std::move(lo), std::move(hi), std::move(body)};
    return n;
}

} // namespace ex

namespace pr {

Pred truth(bool value) {
    auto n = std::make_shared<PredNode>();
    n->kind = value ? PredKind::True : PredKind::False;
    return n;
}

static bool compare(CmpOp op, const Rational& a, const Rational& b) {
    switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
    }
    return false;
}

Pred cmp(CmpOp op, Expr lhs, Expr rhs) {
    if (is_const(lhs) && is_const(rhs)) {
        return truth(compare(op, cval(lhs), cval(rhs)));
    }
    auto n = std::make_shared<PredNode>();
    n->kind = PredKind::Cmp;
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

Pred conj(Pred a, Pred b) {
    if (a->kind == PredKind::False || b->kind == PredKind::False) {
        return truth(false);
    }
    if (a->kind == PredKind::True) {
        return b;
    }
    if (b->kind == PredKind::True) {
        return a;
    }
    auto n = std::make_shared<PredNode>();
    n->kind = PredKind::And;
    n->children = {std::move(a), std::move(b)};
    return n;
}

Pred disj(Pred a, Pred b) {
    if (a->kind == PredKind::True || b->kind == PredKind::True) {
        return truth(true);
    }
    if (a->kind == PredKind::False) {
        return b;
    }
    if (b->kind == PredKind::False) {
        return a;
    }
    auto n = std::make_shared<PredNode>();
    n->kind = PredKind::Or;
    n->children = {std::move(a), std::move(b)};
    return n;
}

Pred negate(Pred a) {
    if (a->kind == PredKind::True || a->kind == PredKind::False) {
        return truth(a->kind == PredKind::False);
    }
    auto n = std::make_shared<PredNode>();
    n->kind = PredKind::Not;
    n->children = {std::move(a)};
    return n;
}

} // namespace pr

// -----------------------------------------------------------------------------
// Structural queries
// -----------------------------------------------------------------------------

static bool any_node(const Expr& e, ExprKind kind);

static bool any_node(const Pred& p, ExprKind kind) {
    if (p->kind == PredKind::Cmp) {
        return any_node(p->lhs, kind) || any_node(p->rhs, kind);
    }
    return std::any_of(p->children.begin(), p->children.end(), [&](const Pred& c) { return any_node(c, kind); });
}

static bool any_node(const Expr& e, ExprKind kind) {
    if (!e) {
        return false;
    }
    if (e->kind == kind) {
        return true;
    }
    if (e->kind == ExprKind::Indicator) {
        return any_node(e->pred, kind);
    }
    return std::any_of(e->args.begin(), e->args.end(), [&](const Expr& a) { return any_node(a, kind); });
}

bool contains_series(const Expr& e) { return any_node(e, ExprKind::Sum); }

bool contains_inf(const Expr& e) {
    if (any_node(e, ExprKind::Inf)) {
        return true;
    }
    return false;
}

bool equal(const Pred& a, const Pred& b) {
    if (a == b) {
        return true;
    }
    if (!a || !b || a->kind != b->kind) {
        return false;
    }
    if (a->kind == PredKind::Cmp) {
        return a->op == b->op && equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
    if (a->children.size() != b->children.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a->children.size(); ++i) {
        if (!equal(a->children[i], b->children[i])) {
            return false;
        }
    }
    return true;
}

bool equal(const Expr& a, const Expr& b) {
    if (a == b) {
        return true;
    }
    if (!a || !b || a->kind != b->kind) {
        return false;
    }
    switch (a->kind) {
    case ExprKind::Const:
        return a->value == b->value;
    case ExprKind::Var:
        return a->name == b->name;
    case ExprKind::Indicator:
        return equal(a->pred, b->pred);
    case ExprKind::Sum:
        if (a->name != b->name) {
            return false;
        }
        break;
    default:
        break;
    }
    if (a->args.size() != b->args.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!equal(a->args[i], b->args[i])) {
            return false;
        }
    }
    return true;
}

static void collect(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out);

static void collect(const Pred& p, std::set<std::string>& bound, std::set<std::string>& out) {
    if (p->kind == PredKind::Cmp) {
        collect(p->lhs, bound, out);
        collect(p->rhs, bound, out);
        return;
    }
    for (const auto& c : p->children) {
        collect(c, bound, out);
    }
}

static void collect(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
    if (!e) {
        return;
    }
    switch (e->kind) {
    case ExprKind::Var:
        if (!bound.contains(e->name)) {
            out.insert(e->name);
        }
        return;
    case ExprKind::Indicator:
        collect(e->pred, bound, out);
        return;
    case ExprKind::Sum: {
        collect(e->args[0], bound, out);
        collect(e->args[1], bound, out);
        const bool was_bound = bound.contains(e->name);
        bound.insert(e->name);
        collect(e->args[2], bound, out);
        if (!was_bound) {
            bound.erase(e->name);
        }
        return;
    }
    default:
        for (const auto& a : e->args) {
            collect(a, bound, out);
        }
    }
}

std::set<std::string> free_variables(const Expr& e) {
    std::set<std::string> bound;
    std::set<std::string> out;
    collect(e, bound, out);
    return out;
}

std::set<std::string> free_variables(const Pred& p) {
    std::set<std::string> bound;
    std::set<std::string> out;
    collect(p, bound, out);
    return out;
}

// -----------------------------------------------------------------------------
// Substitution
// -----------------------------------------------------------------------------

static Expr rebuild(const Expr& e, std::vector<Expr> args) {
    switch (e->kind) {
    case ExprKind::Neg: return ex::neg(args[0]);
    case ExprKind::Add: return ex::add(args[0], args[1]);
    case ExprKind::Sub: return ex::sub(args[0], args[1]);
    case ExprKind::Mul: return ex::mul(args[0], args[1]);
    case ExprKind::Div: return ex::div(args[0], args[1]);
    case ExprKind::Mod: return ex::mod(args[0], args[1]);
    case ExprKind::Pow: return ex::pow(args[0], args[1]);
    case ExprKind::Abs: return ex::abs(args[0]);
    case ExprKind::Sign: return ex::sign(args[0]);
    case ExprKind::Min: return ex::min(args[0], args[1]);
    case ExprKind::Max: return ex::max(args[0], args[1]);
    case ExprKind::Sum: return ex::sum(e->name, args[0], args[1], args[2]);
    default: return e;
    }
}

static std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    std::string candidate = base + "'";
    while (avoid.contains(candidate)) {
        candidate += "'";
    }
    return candidate;
}

Pred substitute(const Pred& p, const std::string& var, const Expr& replacement) {
    switch (p->kind) {
    case PredKind::True:
    case PredKind::False:
        return p;
    case PredKind::Cmp:
        return pr::cmp(p->op, substitute(p->lhs, var, replacement), substitute(p->rhs, var, replacement));
    case PredKind::And:
        return pr::conj(substitute(p->children[0], var, replacement), substitute(p->children[1], var, replacement));
    case PredKind::Or:
        return pr::disj(substitute(p->children[0], var, replacement), substitute(p->children[1], var, replacement));
    case PredKind::Not:
        return pr::negate(substitute(p->children[0], var, replacement));
    }
    return p;
}

Expr substitute(const Expr& e, const std::string& var, const Expr& replacement) {
    if (!e) {
        return e;
    }
    switch (e->kind) {
    case ExprKind::Const:
    case ExprKind::Inf:
        return e;
    case ExprKind::Var:
        return e->name == var ? replacement : e;
    case ExprKind::Indicator:
        return ex::indicator(substitute(e->pred, var, replacement));
    case ExprKind::Sum: {
        Expr lo = substitute(e->args[0], var, replacement);
        Expr hi = substitute(e->args[1], var, replacement);
        if (e->name == var) {
            return ex::sum(e->name, lo, hi, e->args[2]);
        }
        const auto body_fv = free_variables(e->args[2]);
        if (!body_fv.contains(var)) {
            return ex::sum(e->name, lo, hi, e->args[2]);
        }
        const auto repl_fv = free_variables(replacement);
        if (repl_fv.contains(e->name)) {
            std::set<std::string> avoid = body_fv;
            avoid.insert(repl_fv.begin(), repl_fv.end());
            avoid.insert(var);
            const std::string renamed = fresh_name(e->name, avoid);
            Expr body = substitute(e->args[2], e->name, ex::var(renamed));
            return ex::sum(renamed, lo, hi, substitute(body, var, replacement));
        }
        return ex::sum(e->name, lo, hi, substitute(e->args[2], var, replacement));
    }
    default: {
        std::vector<Expr> args;
        args.reserve(e->args.size());
        for (const auto& a : e->args) {
            args.push_back(substitute(a, var, replacement));
        }
        return rebuild(e, std::move(args));
    }
    }
}

// -----------------------------------------------------------------------------
// Printing. Precedence: 1 additive, 2 multiplicative, 3 unary minus, 4 power, 5 atom.
// -----------------------------------------------------------------------------

static int precedence(const Expr& e) {
    switch (e->kind) {
    case ExprKind::Const:
        if (e->value < 0) {
            return 3;
        }
        return is_integer(e->value) ? 5 : 2;
    case ExprKind::Add:
    case ExprKind::Sub:
        return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Mod:
        return 2;
    case ExprKind::Neg:
        return 3;
    case ExprKind::Pow:
        return 4;
    default:
        return 5;
    }
}

static void print(std::ostream& os, const Expr& e, int min_prec);
static void print(std::ostream& os, const Pred& p, int min_prec);

static void print_const(std::ostream& os, const Rational& v) {
    if (v < 0) {
        os << '-';
        print_const(os, Rational(-v));
        return;
    }
    os << v.get_num().get_str();
    if (v.get_den() != 1) {
        os << '/' << v.get_den().get_str();
    }
}

static void print(std::ostream& os, const Expr& e, int min_prec) {
    const int prec = precedence(e);
    const bool paren = prec < min_prec;
    if (paren) {
        os << '(';
    }
    switch (e->kind) {
    case ExprKind::Const:
        print_const(os, e->value);
        break;
    case ExprKind::Var:
        os << e->name;
        break;
    case ExprKind::Inf:
        os << "inf";
        break;
    case ExprKind::Neg:
        os << '-';
        print(os, e->args[0], 4);
        break;
    case ExprKind::Add:
    case ExprKind::Sub:
        print(os, e->args[0], 1);
        os << (e->kind == ExprKind::Add ? " + " : " - ");
        print(os, e->args[1], 2);
        break;
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Mod:
        print(os, e->args[0], 2);
        os << (e->kind == ExprKind::Mul ? " * " : e->kind == ExprKind::Div ? " / " : " mod ");
        print(os, e->args[1], 3);
        break;
    case ExprKind::Pow:
        print(os, e->args[0], 5);
        os << '^';
        print(os, e->args[1], 3);
        break;
    case ExprKind::Abs:
    case ExprKind::Sign:
        os << (e->kind == ExprKind::Abs ? "abs(" : "sign(");
        print(os, e->args[0], 0);
        os << ')';
        break;
    case ExprKind::Min:
    case ExprKind::Max:
        os << (e->kind == ExprKind::Min ? "min(" : "max(");
        print(os, e->args[0], 0);
        os << ", ";
        print(os, e->args[1], 0);
        os << ')';
        break;
    case ExprKind::Indicator:
        os << '[';
        print(os, e->pred, 0);
        os << ']';
        break;
    case ExprKind::Sum:
        os << "sum(" << e->name << ", ";
        print(os, e->args[0], 0);
        os << ", ";
        if (e->args[1]) {
            print(os, e->args[1], 0);
        } else {
            os << "inf";
        }
        os << ", ";
        print(os, e->args[2], 0);
        os << ')';
        break;
    }
    if (paren) {
        os << ')';
    }
}

static const char* op_text(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return " = ";
    case CmpOp::Ne: return " != ";
    case CmpOp::Lt: return " < ";
    case CmpOp::Le: return " <= ";
    case CmpOp::Gt: return " > ";
    case CmpOp::Ge: return " >= ";
    }
    return " ? ";
}

// Predicate precedence: 1 or, 2 and, 3 not, 4 comparison/constant.
static void print(std::ostream& os, const Pred& p, int min_prec) {
    int prec = 4;
    if (p->kind == PredKind::Or) {
        prec = 1;
    } else if (p->kind == PredKind::And) {
        prec = 2;
    } else if (p->kind == PredKind::Not) {
        prec = 3;
    }
    const bool paren = prec < min_prec;
    if (paren) {
        os << '(';
    }
    switch (p->kind) {
    case PredKind::True:
        os << "true";
        break;
    case PredKind::False:
        os << "false";
        break;
    case PredKind::Cmp:
        print(os, p->lhs, 1);
        os << op_text(p->op);
        print(os, p->rhs, 1);
        break;
    case PredKind::And:
    case PredKind::Or:
        print(os, p->children[0], prec);
        os << (p->kind == PredKind::And ? " && " : " || ");
        print(os, p->children[1], prec + 1);
        break;
    case PredKind::Not:
        os << '!';
        print(os, p->children[0], 5);
        break;
    }
    if (paren) {
        os << ')';
    }
}

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e, 0);
    return os.str();
}

std::string to_string(const Pred& p) {
    std::ostringstream os;
    print(os, p, 0);
    return os.str();
}

// -----------------------------------------------------------------------------
// Programs
// -----------------------------------------------------------------------------

namespace stmt {

Program skip() {
    auto n = std::make_shared<ProgramNode>();
    n->kind = StmtKind::Skip;
    return n;
}

Program assign(const std::string& var, Expr rhs) {
    auto n = std::make_shared<ProgramNode>();
    n->kind = StmtKind::Assign;
    n->var = var;
    n->expr = std::move(rhs);
    return n;
}

Program seq(Program a, Program b) {
    auto n = std::make_shared<ProgramNode>();
    n->kind = StmtKind::Seq;
    n->first = std::move(a);
    n->second = std::move(b);
    return n;
}

Program ite(Expr guard, Program then_branch, Program else_branch) {
    auto n = std::make_shared<ProgramNode>();
    n->kind = StmtKind::If;
    n->expr = std::move(guard);
    n->first = std::move(then_branch);
    n->second = std::move(else_branch);
    return n;
}

Program loop(Expr guard, Program body) {
    auto n = std::make_shared<ProgramNode>();
    n->kind = StmtKind::While;
    n->expr = std::move(guard);
    n->first = std::move(body);
    return n;
}

Program sequence(const std::vector<Program>& parts) {
    if (parts.empty()) {
        return skip();
    }
    Program result = parts.back();
    for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) {
        result = seq(*it, result);
    }
    return result;
}

} // namespace stmt

bool equal(const Program& a, const Program& b) {
    if (a == b) {
        return true;
    }
    if (!a || !b || a->kind != b->kind) {
        return false;
    }
    switch (a->kind) {
    case StmtKind::Skip:
        return true;
    case StmtKind::Assign:
        return a->var == b->var && equal(a->expr, b->expr);
    case StmtKind::Seq:
        return equal(a->first, b->first) && equal(a->second, b->second);
    case StmtKind::If:
        return equal(a->expr, b->expr) && equal(a->first, b->first) && equal(a->second, b->second);
    case StmtKind::While:
        return equal(a->expr, b->expr) && equal(a->first, b->first);
    }
    return false;
}

bool is_loop_free(const Program& p) {
    switch (p->kind) {
    case StmtKind::Skip:
    case StmtKind::Assign:
        return true;
    case StmtKind::Seq:
    case StmtKind::If:
        return is_loop_free(p->first) && is_loop_free(p->second);
    case StmtKind::While:
        return false;
    }
    return false;
}

static void collect_program(const Program& p, std::set<std::string>& out) {
    switch (p->kind) {
    case StmtKind::Skip:
        return;
    case StmtKind::Assign: {
        out.insert(p->var);
        const auto fv = free_variables(p->expr);
        out.insert(fv.begin(), fv.end());
        return;
    }
    case StmtKind::Seq:
    case StmtKind::If:
    case StmtKind::While: {
        if (p->expr) {
            const auto fv = free_variables(p->expr);
            out.insert(fv.begin(), fv.end());
        }
        collect_program(p->first, out);
        if (p->second) {
            collect_program(p->second, out);
        }
        return;
    }
    }
}

std::set<std::string> free_variables(const Program& p) {
    std::set<std::string> out;
    collect_program(p, out);
    return out;
}

int guard_depth(const Program& p) {
    switch (p->kind) {
    case StmtKind::Skip:
    case StmtKind::Assign:
        return 0;
    case StmtKind::Seq:
        return guard_depth(p->first) + guard_depth(p->second);
    case StmtKind::If:
        return 1 + std::max(guard_depth(p->first), guard_depth(p->second));
    case StmtKind::While:
        throw std::invalid_argument("guard_depth: program contains a loop");
    }
    return 0;
}

std::vector<Program> top_level_statements(const Program& p) {
    std::vector<Program> out;
    if (p->kind == StmtKind::Seq) {
        auto left = top_level_statements(p->first);
        auto right = top_level_statements(p->second);
        out.insert(out.end(), left.begin(), left.end());
        out.insert(out.end(), right.begin(), right.end());
    } else {
        out.push_back(p);
    }
    return out;
}

static std::string guard_text(const Expr& g) {
    if (g->kind == ExprKind::Indicator) {
        return to_string(g->pred);
    }
    return to_string(g);
}

static void print_program(std::ostream& os, const Program& p, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    switch (p->kind) {
    case StmtKind::Skip:
        os << "skip";
        break;
    case StmtKind::Assign:
        os << p->var << " := " << to_string(p->expr);
        break;
    case StmtKind::Seq:
        if (p->first->kind == StmtKind::Seq) {
            os << "{\n" << pad << "  ";
            print_program(os, p->first, indent + 1);
            os << "\n" << pad << "}";
        } else {
            print_program(os, p->first, indent);
        }
        os << ";\n" << pad;
        print_program(os, p->second, indent);
        break;
    case StmtKind::If:
        os << "if (" << guard_text(p->expr) << ") {\n" << pad << "  ";
        print_program(os, p->first, indent + 1);
        os << "\n" << pad << "} else {\n" << pad << "  ";
        print_program(os, p->second, indent + 1);
        os << "\n" << pad << "}";
        break;
    case StmtKind::While:
        os << "while (" << guard_text(p->expr) << ") {\n" << pad << "  ";
        print_program(os, p->first, indent + 1);
        os << "\n" << pad << "}";
        break;
    }
}

std::string to_string(const Program& p, int indent) {
    std::ostringstream os;
    print_program(os, p, indent);
    return os.str();
}

} // namespace iwe
