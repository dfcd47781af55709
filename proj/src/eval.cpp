// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#include "iwe/eval.hpp"

#include <algorithm>
#include <vector>

#include "iwe/errors.hpp"

namespace iwe {

namespace {

// Largest exponent we are willing to expand exactly.
constexpr unsigned long max_exponent = 1UL << 20;

class Evaluator {
  public:
    Evaluator(const State& s, const EvalOptions& opts, EvalTrace* trace) : state_(s), opts_(opts), trace_(trace) {}

    ExtValue eval(const Expr& e) {
        switch (e->kind) {
        case ExprKind::Const:
            return e->value;
        case ExprKind::Var:
            return Rational(lookup(e->name));
        case ExprKind::Inf:
            return ExtValue::infinity();
        case ExprKind::Neg: {
            const Rational v = finite(eval(e->args[0]), "negation");
            return Rational(-v);
        }
        case ExprKind::Add: {
            const ExtValue a = eval(e->args[0]);
            const ExtValue b = eval(e->args[1]);
            if (a.is_inf() || b.is_inf()) {
                return ExtValue::infinity();
            }
            return Rational(a.value() + b.value());
        }
        case ExprKind::Sub: {
            const ExtValue a = eval(e->args[0]);
            const ExtValue b = eval(e->args[1]);
            if (b.is_inf()) {
                throw EvalError("subtracting inf at state {" + state_.to_string() + "}");
            }
            if (a.is_inf()) {
                return a;
            }
            return Rational(a.value() - b.value());
        }
        case ExprKind::Mul:
            return multiply(e);
        case ExprKind::Div: {
            const ExtValue a = eval(e->args[0]);
            const Rational b = finite(eval(e->args[1]), "a denominator");
            if (b == 0) {
                throw EvalError("division by zero in '" + to_string(e) + "' at state {" + state_.to_string() + "}");
            }
            if (a.is_inf()) {
                if (b < 0) {
                    throw EvalError("inf divided by a negative value");
                }
                return a;
            }
            return Rational(a.value() / b);
        }
        case ExprKind::Mod: {
            const Rational a = finite(eval(e->args[0]), "mod");
            const Rational b = finite(eval(e->args[1]), "mod");
            if (!is_integer(a) || !is_integer(b)) {
                throw EvalError("mod needs integer operands in '" + to_string(e) + "'");
            }
            if (b == 0) {
                throw EvalError("modulo by zero in '" + to_string(e) + "' at state {" + state_.to_string() + "}");
            }
            return Rational(floor_mod(a.get_num(), b.get_num()));
        }
        case ExprKind::Pow:
            return power(e);
        case ExprKind::Abs: {
            const ExtValue a = eval(e->args[0]);
            return a.is_inf() ? a : ExtValue(abs(a.value()));
        }
        case ExprKind::Sign: {
            const ExtValue a = eval(e->args[0]);
            return a.is_inf() ? ExtValue(1L) : ExtValue(static_cast<long>(sign(a.value())));
        }
        case ExprKind::Min:
        case ExprKind::Max: {
            const ExtValue a = eval(e->args[0]);
            const ExtValue b = eval(e->args[1]);
            const bool a_smaller = b.is_inf() || (!a.is_inf() && a.value() <= b.value());
            if (e->kind == ExprKind::Min) {
                return a_smaller ? a : b;
            }
            return a_smaller ? b : a;
        }
        case ExprKind::Indicator:
            return ExtValue(pred(e->pred) ? 1L : 0L);
        case ExprKind::Sum:
            return series(e);
        }
        throw EvalError("unknown expression node");
    }

    bool pred(const Pred& p) {
        switch (p->kind) {
        case PredKind::True:
            return true;
        case PredKind::False:
            return false;
        case PredKind::Cmp: {
            const Rational a = finite(eval(p->lhs), "a comparison");
            const Rational b = finite(eval(p->rhs), "a comparison");
            switch (p->op) {
            case CmpOp::Eq: return a == b;
            case CmpOp::Ne: return a != b;
            case CmpOp::Lt: return a < b;
            case CmpOp::Le: return a <= b;
            case CmpOp::Gt: return a > b;
            case CmpOp::Ge: return a >= b;
            }
            return false;
        }
        case PredKind::And:
            return pred(p->children[0]) && pred(p->children[1]);
        case PredKind::Or:
            return pred(p->children[0]) || pred(p->children[1]);
        case PredKind::Not:
            return !pred(p->children[0]);
        }
        return false;
    }

  private:
    const State& state_;
    const EvalOptions& opts_;
    EvalTrace* trace_;
    // Series indices in scope, innermost last.
    std::vector<std::pair<const std::string*, Integer>> locals_;

    const Integer& lookup(const std::string& name) const {
        for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
            if (*it->first == name) {
                return it->second;
            }
        }
        return state_.at(name);
    }

    Rational finite(const ExtValue& v, const char* where) const {
        if (v.is_inf()) {
            throw EvalError(std::string("inf is not allowed in ") + where + " (state {" + state_.to_string() + "})");
        }
        return v.value();
    }

    ExtValue multiply(const Expr& e) {
        const ExtValue a = eval(e->args[0]);
        // A zero left factor short-circuits: this is how zero-weight branches vanish.
        if (!a.is_inf() && a.value() == 0) {
            return Rational(0);
        }
        const ExtValue b = eval(e->args[1]);
        if (a.is_inf() || b.is_inf()) {
            const ExtValue& other = a.is_inf() ? b : a;
            if (other.is_inf() || other.value() > 0) {
                return ExtValue::infinity();
            }
            if (other.value() == 0) {
                throw DomainError("0 * inf in '" + to_string(e) + "' at state {" + state_.to_string() + "}");
            }
            throw EvalError("negative multiple of inf in '" + to_string(e) + "'");
        }
        return Rational(a.value() * b.value());
    }

    ExtValue power(const Expr& e) {
        const ExtValue base = eval(e->args[0]);
        const Rational exp = finite(eval(e->args[1]), "an exponent");
        if (!is_integer(exp) || exp < 0) {
            throw EvalError("exponent " + to_string(exp) + " is not a non-negative integer in '" + to_string(e) +
                            "' at state {" + state_.to_string() + "}");
        }
        if (exp > max_exponent) {
            throw EvalError("exponent " + to_string(exp) + " too large");
        }
        const unsigned long k = exp.get_num().get_ui();
        if (base.is_inf()) {
            return k == 0 ? ExtValue(1L) : base;
        }
        Rational r;
        mpz_pow_ui(r.get_num_mpz_t(), base.value().get_num_mpz_t(), k);
        mpz_pow_ui(r.get_den_mpz_t(), base.value().get_den_mpz_t(), k);
        r.canonicalize();
        return r;
    }

    Integer integer_bound(const Expr& e) {
        const Rational v = finite(eval(e), "a series bound");
        if (!is_integer(v)) {
            throw EvalError("series bound " + to_string(v) + " is not an integer");
        }
        return v.get_num();
    }

    ExtValue series(const Expr& e) {
        const Integer lo = integer_bound(e->args[0]);
        const std::string* index = &e->name;
        if (e->args[1]) {
            const Integer hi = integer_bound(e->args[1]);
            Rational total;
            for (Integer i = lo; i <= hi; ++i) {
                locals_.emplace_back(index, i);
                const ExtValue term = eval(e->args[2]);
                locals_.pop_back();
                if (trace_) {
                    ++trace_->series_terms;
                }
                if (term.is_inf()) {
                    return term;
                }
                total += term.value();
            }
            return total;
        }

        SequenceMonitor mon(opts_.series);
        Rational total;
        bool negative_terms = false;
        for (Integer i = lo;; ++i) {
            locals_.emplace_back(index, i);
            const ExtValue term = eval(e->args[2]);
            locals_.pop_back();
            if (trace_) {
                ++trace_->series_terms;
            }
            if (term.is_inf()) {
                return term;
            }
            negative_terms = negative_terms || term.value() < 0;
            total += term.value();
            const Verdict v = mon.push(total.get_d(), term.value().get_d());
            if (v == Verdict::Running) {
                continue;
            }
            if (trace_) {
                trace_->approximated = true;
            }
            if (v == Verdict::Converged) {
                return total;
            }
            if (v == Verdict::Exhausted && negative_terms) {
                throw EvalError("series '" + to_string(e) + "' does not settle at state {" + state_.to_string() + "}");
            }
            if (trace_) {
                trace_->diverged = true;
            }
            if (negative_terms && total < 0) {
                throw EvalError("series '" + to_string(e) + "' diverges to -inf at state {" + state_.to_string() + "}");
            }
            return ExtValue::infinity();
        }
    }
};

} // namespace

ExtValue eval_expr(const Expr& e, const State& s, const EvalOptions& opts, EvalTrace* trace) {
    return Evaluator(s, opts, trace).eval(e);
}

bool eval_pred(const Pred& p, const State& s, const EvalOptions& opts) { return Evaluator(s, opts, nullptr).pred(p); }

Rational eval_guard(const Expr& guard, const State& s) {
    const ExtValue v = eval_expr(guard, s);
    if (v.is_inf() || v.value() < 0 || v.value() > 1) {
        throw EvalError("guard '" + to_string(guard) + "' evaluates to " + v.to_string() + " outside [0,1] at state {" +
                        s.to_string() + "}");
    }
    return v.value();
}

Integer eval_integer(const Expr& e, const State& s) {
    const ExtValue v = eval_expr(e, s);
    if (v.is_inf() || !is_integer(v.value())) {
        throw EvalError("assignment value " + v.to_string() + " of '" + to_string(e) + "' is not an integer at state {" +
                        s.to_string() + "}");
    }
    return v.value().get_num();
}

} // namespace iwe
