#pragma once

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "acas/cas.hpp"
#include "acas/snapshot.hpp"

namespace acas::testing {

inline SnapshotPtr make_snapshot(std::map<std::string, Value> values,
                                 const std::string& serviceId = "svc") {
  std::map<std::string, SnapshotEntry> entries;
  const auto now = Clock::now();
  for (auto& [path, value] : values) {
    entries[path] = {std::move(value), "test", now};
  }
  return std::make_shared<ContextSnapshot>(serviceId, now, std::move(entries));
}

/// Flat model: every descriptor in one sub-context.
inline ContextModel flat_model(std::vector<ParameterDescriptor> params,
                               const std::string& name = "test") {
  ContextModel model;
  model.name = name;
  SubContext sc;
  sc.name = "root";
  sc.parameters = std::move(params);
  model.subContexts.push_back(std::move(sc));
  return model;
}

inline ParameterDescriptor simple_param(const std::string& path,
                                        ValueType type = ValueType::Number) {
  ParameterDescriptor p;
  p.path = path;
  p.kind = ParamKind::Simple;
  p.valueType = type;
  return p;
}

/// Random condition expressions for round-trip and oracle tests.
class ExpressionGen {
 public:
  ExpressionGen(std::mt19937& rng, std::vector<std::string> paths)
      : rng_(rng), paths_(std::move(paths)) {}

  /// Arbitrary expression up to the depth bound: comparisons over numbers,
  /// strings, booleans and paths, exists() atoms, and/or/not combinators.
  ExprPtr any(int maxDepth) {
    if (maxDepth <= 0 || chance(40)) return atom();
    auto node = std::make_shared<ConditionExpr>();
    switch (pick(3)) {
      case 0:
        node->kind = ConditionExpr::Kind::And;
        node->lhs = any(maxDepth - 1);
        node->rhs = any(maxDepth - 1);
        break;
      case 1:
        node->kind = ConditionExpr::Kind::Or;
        node->lhs = any(maxDepth - 1);
        node->rhs = any(maxDepth - 1);
        break;
      default:
        node->kind = ConditionExpr::Kind::Not;
        node->lhs = any(maxDepth - 1);
        break;
    }
    return node;
  }

  /// Boolean-comparison expressions over `atomPaths` with and/or/not, at
  /// most `maxAtoms` atoms. Total on snapshots assigning every path.
  ExprPtr boolean_expr(const std::vector<std::string>& atomPaths, int maxDepth, int& atomBudget) {
    if (maxDepth <= 0 || atomBudget <= 1 || chance(35)) {
      --atomBudget;
      return boolean_atom(atomPaths);
    }
    auto node = std::make_shared<ConditionExpr>();
    switch (pick(3)) {
      case 0: node->kind = ConditionExpr::Kind::And; break;
      case 1: node->kind = ConditionExpr::Kind::Or; break;
      default:
        node->kind = ConditionExpr::Kind::Not;
        node->lhs = boolean_expr(atomPaths, maxDepth - 1, atomBudget);
        return node;
    }
    node->lhs = boolean_expr(atomPaths, maxDepth - 1, atomBudget);
    node->rhs = boolean_expr(atomPaths, maxDepth - 1, atomBudget);
    return node;
  }

 private:
  bool chance(int percent) { return pick(100) < percent; }
  int pick(int bound) { return static_cast<int>(rng_() % static_cast<unsigned>(bound)); }

  const std::string& path() { return paths_[static_cast<std::size_t>(pick(static_cast<int>(paths_.size())))]; }

  Value literal() {
    switch (pick(4)) {
      case 0: return Value(pick(200) - 100);
      case 1: return Value(static_cast<double>(pick(40)) / 4.0);
      case 2: return Value(pick(2) == 0);
      default: {
        static const char* words[] = {"fr", "en", "sunny", "low_mode", "x9"};
        return Value(std::string(words[pick(5)]));
      }
    }
  }

  ExprPtr atom() {
    auto node = std::make_shared<ConditionExpr>();
    if (chance(25)) {
      node->kind = ConditionExpr::Kind::Exists;
      node->path = path();
      return node;
    }
    node->kind = ConditionExpr::Kind::Compare;
    node->op = static_cast<CompareOp>(pick(6));
    node->left = {true, path(), Value()};
    if (chance(30)) {
      node->right = {true, path(), Value()};
    } else {
      node->right = {false, "", literal()};
    }
    return node;
  }

  ExprPtr boolean_atom(const std::vector<std::string>& atomPaths) {
    auto node = std::make_shared<ConditionExpr>();
    node->kind = ConditionExpr::Kind::Compare;
    node->op = pick(2) == 0 ? CompareOp::Eq : CompareOp::Ne;
    node->left = {true, atomPaths[static_cast<std::size_t>(pick(static_cast<int>(atomPaths.size())))],
                  Value()};
    node->right = {false, "", Value(pick(2) == 0)};
    return node;
  }

  std::mt19937& rng_;
  std::vector<std::string> paths_;
};

/// Independent truth-table evaluator for boolean expressions over an
/// assignment of boolean paths. No short-circuit, no error handling; total
/// by construction.
inline bool truth_table_eval(const ConditionExpr& expr, const std::map<std::string, bool>& env) {
  switch (expr.kind) {
    case ConditionExpr::Kind::And:
      return truth_table_eval(*expr.lhs, env) && truth_table_eval(*expr.rhs, env);
    case ConditionExpr::Kind::Or:
      return truth_table_eval(*expr.lhs, env) || truth_table_eval(*expr.rhs, env);
    case ConditionExpr::Kind::Not:
      return !truth_table_eval(*expr.lhs, env);
    case ConditionExpr::Kind::Compare: {
      const bool value = env.at(expr.left.path);
      const bool literal = expr.right.literal.get<bool>();
      return expr.op == CompareOp::Eq ? value == literal : value != literal;
    }
    case ConditionExpr::Kind::Exists:
      return env.count(expr.path) != 0;
  }
  return false;
}

/// Registry with four dummy behaviors covering every advice kind, for
/// document generation and validation tests.
inline AdaptationRegistry dummy_registry() {
  AdaptationRegistry registry;
  auto passthrough = [](Json doc, const BoundArgs&, const ContextAccessor&) { return doc; };
  auto around = [](Json request, const ProceedFn& proceed, const BoundArgs&,
                   const ContextAccessor&) { return proceed(std::move(request)); };
  registry.register_adaptation("noopBefore", {.before = passthrough});
  registry.register_adaptation("noopAfter", {.after = passthrough});
  registry.register_adaptation("noopAround", {.around = around});
  registry.register_adaptation("noopReplace", {.replace = passthrough});
  return registry;
}

/// Random valid CAS documents for round-trip properties. Adaptation names
/// come from dummy_registry().
class CasGen {
 public:
  explicit CasGen(std::mt19937& rng) : rng_(rng) {}

  CasDocument generate() {
    CasDocument document;
    document.cas.serviceId = "Svc" + std::to_string(pick(100));

    // Model: 4-8 simple params, maybe one complex and one derived.
    const int paramCount = 4 + pick(5);
    std::vector<std::string> paths;
    SubContext sc;
    sc.name = "ctx";
    for (int i = 0; i < paramCount; ++i) {
      const std::string path = "ctx.p" + std::to_string(i);
      paths.push_back(path);
      auto param = simple_param(path, pick(2) == 0 ? ValueType::Number : ValueType::String);
      if (pick(10) == 0) param.unit = "unit" + std::to_string(pick(5));
      sc.parameters.push_back(std::move(param));
    }
    if (pick(2) == 0) {
      ParameterDescriptor geo;
      geo.path = "ctx.gps";
      geo.kind = ParamKind::Complex;
      geo.valueType = ValueType::Geo;
      geo.representations = {"DD", "DMS"};
      sc.parameters.push_back(geo);
      ParameterDescriptor geo2 = geo;
      geo2.path = "ctx.gps2";
      sc.parameters.push_back(geo2);
      ParameterDescriptor derived;
      derived.path = "ctx.dist";
      derived.kind = ParamKind::Derived;
      derived.valueType = ValueType::Number;
      derived.derivation = DerivationSpec{"greatCircleDistanceKm", {"ctx.gps", "ctx.gps2"}};
      sc.parameters.push_back(derived);
    }
    document.model.name = "gen";
    document.model.subContexts.push_back(std::move(sc));
    if (pick(2) == 0) {
      Entity entity;
      entity.name = "Thing";
      document.model.entities.push_back(std::move(entity));
    }

    // Views: 1-3, paths drawn from the simple params; later views may
    // aggregate earlier ones.
    const int viewCount = 1 + pick(3);
    for (int v = 0; v < viewCount; ++v) {
      ContextView view;
      view.name = "View" + std::to_string(v);
      const int pathCount = 1 + pick(3);
      std::set<std::string> chosen;
      for (int i = 0; i < pathCount; ++i) {
        chosen.insert(paths[static_cast<std::size_t>(pick(static_cast<int>(paths.size())))]);
      }
      view.paths.assign(chosen.begin(), chosen.end());
      if (v > 0 && pick(3) == 0) view.subViewRefs.push_back("View" + std::to_string(pick(v)));
      document.cas.views.push_back(std::move(view));
    }

    // One strategy per view, 1-3 bindings each.
    static const char* adaptations[] = {"noopBefore", "noopAfter", "noopAround", "noopReplace"};
    static const AdviceKind kinds[] = {AdviceKind::Before, AdviceKind::After, AdviceKind::Around,
                                       AdviceKind::Replace};
    for (std::size_t v = 0; v < document.cas.views.size(); ++v) {
      CVSAdaptationStrategy cvs;
      cvs.viewName = document.cas.views[v].name;
      cvs.strategy.name = "Strategy" + std::to_string(v);
      const auto effective = required_paths(document.cas.views[v], document.cas);
      const std::vector<std::string> viewPaths(effective.begin(), effective.end());
      ExpressionGen exprGen(rng_, viewPaths);
      const int bindingCount = 1 + pick(3);
      for (int b = 0; b < bindingCount; ++b) {
        AdaptationBinding binding;
        binding.declarationIndex = b;
        binding.priority = pick(200) - 100;
        const ExprPtr ast = exprGen.any(2);
        binding.condition = {pretty_print(*ast), ast};
        const int kindIndex = pick(4);
        binding.rule.advice = kinds[kindIndex];
        binding.rule.targetService = pick(4) == 0 ? "*" : document.cas.serviceId;
        binding.rule.targetOperation = pick(2) == 0 ? "*" : "op" + std::to_string(pick(3));
        binding.adaptation.name = adaptations[kindIndex];
        if (pick(2) == 0) {
          binding.adaptation.args.emplace("n", ArgValue::of(Value(pick(50))));
        }
        if (pick(3) == 0) {
          static const char* strings[] = {"plain", "5", "true", "with space", ""};
          binding.adaptation.args.emplace("s", ArgValue::of(Value(std::string(strings[pick(5)]))));
        }
        if (pick(3) == 0) {
          binding.adaptation.args.emplace(
              "p", ArgValue::context_path(paths[static_cast<std::size_t>(
                       pick(static_cast<int>(paths.size())))]));
        }
        cvs.strategy.bindings.push_back(std::move(binding));
      }
      document.cas.cvsStrategies.push_back(std::move(cvs));
    }
    return document;
  }

 private:
  int pick(int bound) { return static_cast<int>(rng_() % static_cast<unsigned>(bound)); }

  std::mt19937& rng_;
};

}  // namespace acas::testing
