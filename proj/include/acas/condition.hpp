#pragma once

#include <memory>
#include <set>
#include <string>

#include "acas/snapshot.hpp"

namespace acas {

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

const char* to_string(CompareOp op);

/// A comparison side: either a context path or a typed literal.
struct Operand {
  bool isPath = false;
  std::string path;
  Value literal;
};

struct ConditionExpr;
using ExprPtr = std::shared_ptr<const ConditionExpr>;

/// Expression tree for the condition language:
///   expr   := or-chain of and-chains, unary `not`, parentheses
///   atom   := operand (== != < <= > >=) operand | exists(path)
/// with at least one path per comparison; ordering is numeric-only.
struct ConditionExpr {
  enum class Kind { And, Or, Not, Compare, Exists };

  Kind kind;
  ExprPtr lhs;  // And/Or left, Not operand
  ExprPtr rhs;  // And/Or right
  CompareOp op = CompareOp::Eq;
  Operand left;   // Compare
  Operand right;  // Compare
  std::string path;  // Exists
};

struct AdaptationCondition {
  std::string sourceText;
  ExprPtr ast;
};

/// Throws SyntaxError (with offset) on malformed input.
AdaptationCondition parse_condition(const std::string& text);

/// Canonical rendering; parses back to a structurally identical tree.
std::string pretty_print(const ConditionExpr& expr);

/// Strict two-valued evaluation. Resolving a path may trigger derived
/// parameter computation. `and`/`or` suppress a branch error only when the
/// other branch already determines the result. Throws UnavailableError or
/// TypeMismatch otherwise; callers treat both as "skip this binding".
bool evaluate_condition(const AdaptationCondition& condition, const ContextAccessor& context);

bool structurally_equal(const ConditionExpr& a, const ConditionExpr& b);

/// Paths appearing as comparison operands (the ones that can raise
/// Unavailable during evaluation).
std::set<std::string> compared_paths(const ConditionExpr& expr);

/// Every path mentioned anywhere, including exists() guards.
std::set<std::string> all_paths(const ConditionExpr& expr);

}  // namespace acas
