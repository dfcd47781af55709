// Copyright (c) IWE contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "iwe/rational.hpp"

namespace iwe {

// -----------------------------------------------------------------------------
// Expressions denote expectations f : states -> Q u {inf}. Nodes are immutable
// and shared; every constructor below performs constant folding so that the
// parser and the symbolic transformers agree on one canonical tree.
// -----------------------------------------------------------------------------

struct ExprNode;
struct PredNode;
using Expr = std::shared_ptr<const ExprNode>;
using Pred = std::shared_ptr<const PredNode>;

enum class ExprKind { Const, Var, Neg, Add, Sub, Mul, Div, Mod, Pow, Abs, Sign, Min, Max, Indicator, Sum, Inf };

struct ExprNode {
    ExprKind kind;
    Rational value;          // Const
    std::string name;        // Var, or the bound index of Sum
    std::vector<Expr> args;  // operands; Sum: {lo, hi, body} with hi == nullptr for an infinite series
    Pred pred;               // Indicator
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class PredKind { True, False, Cmp, And, Or, Not };

struct PredNode {
    PredKind kind;
    CmpOp op = CmpOp::Eq;
    Expr lhs;
    Expr rhs;
    std::vector<Pred> children;
};

namespace ex {
Expr constant(const Rational& v);
Expr constant(long v);
Expr var(const std::string& name);
Expr inf();
Expr neg(Expr a);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr mod(Expr a, Expr b);
Expr pow(Expr base, Expr exponent);
Expr abs(Expr a);
Expr sign(Expr a);
Expr min(Expr a, Expr b);
Expr max(Expr a, Expr b);
Expr indicator(Pred p);
/// Pass hi == nullptr for an infinite upper bound.
Expr sum(const std::string& index, Expr lo, Expr hi, Expr body);
} // namespace ex

namespace pr {
Pred truth(bool value);
Pred cmp(CmpOp op, Expr lhs, Expr rhs);
Pred conj(Pred a, Pred b);
Pred disj(Pred a, Pred b);
Pred negate(Pred a);
} // namespace pr

bool is_const(const Expr& e);
bool contains_series(const Expr& e);
bool contains_inf(const Expr& e);

/// Structural equality of trees.
bool equal(const Expr& a, const Expr& b);
bool equal(const Pred& a, const Pred& b);

std::set<std::string> free_variables(const Expr& e);
std::set<std::string> free_variables(const Pred& p);

/// Capture-avoiding substitution e[var / replacement]; series indices are renamed
/// when they would capture a free variable of the replacement.
Expr substitute(const Expr& e, const std::string& var, const Expr& replacement);
Pred substitute(const Pred& p, const std::string& var, const Expr& replacement);

/// Source text that parses back to an equal tree.
std::string to_string(const Expr& e);
std::string to_string(const Pred& p);

// -----------------------------------------------------------------------------
// Programs of the probabilistic guarded command language.
// -----------------------------------------------------------------------------

struct ProgramNode;
using Program = std::shared_ptr<const ProgramNode>;

enum class StmtKind { Skip, Assign, Seq, If, While };

struct ProgramNode {
    StmtKind kind;
    std::string var;  // Assign target
    Expr expr;        // Assign right-hand side, or the probabilistic guard of If/While
    Program first;    // Seq left, If then-branch, While body
    Program second;   // Seq right, If else-branch
};

namespace stmt {
Program skip();
Program assign(const std::string& var, Expr rhs);
Program seq(Program a, Program b);
Program ite(Expr guard, Program then_branch, Program else_branch);
Program loop(Expr guard, Program body);
/// Right-nested sequence of the given statements; skip when empty.
Program sequence(const std::vector<Program>& parts);
} // namespace stmt

bool equal(const Program& a, const Program& b);
bool is_loop_free(const Program& p);
std::set<std::string> free_variables(const Program& p);

/// Number of guard evaluations on the longest path of a loop-free program.
int guard_depth(const Program& p);

/// Flattens nested Seq nodes into the list of top-level statements.
std::vector<Program> top_level_statements(const Program& p);

std::string to_string(const Program& p, int indent = 0);

} // namespace iwe
