#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "acas/condition.hpp"

namespace acas {

enum class AdviceKind { Before, After, Around, Replace };

const char* to_string(AdviceKind kind);
AdviceKind advice_kind_from_string(const std::string& name);

/// Where an adaptation weaves in: which service, which operation, and at
/// which position relative to the core handler. "*" is the wildcard.
struct AdaptationRule {
  std::string targetService = "*";
  std::string targetOperation = "*";
  AdviceKind advice = AdviceKind::After;

  bool matches_service(const std::string& serviceId) const {
    return targetService == "*" || targetService == serviceId;
  }
  bool matches_operation(const std::string& operation) const {
    return targetOperation == "*" || targetOperation == operation;
  }

  friend bool operator==(const AdaptationRule&, const AdaptationRule&) = default;
};

/// An adaptation argument: a literal, or a context path resolved against the
/// snapshot when the behavior runs.
struct ArgValue {
  bool isPath = false;
  Value literal;
  std::string path;

  static ArgValue of(Value literal) { return {false, std::move(literal), {}}; }
  static ArgValue context_path(std::string path) { return {true, Value(), std::move(path)}; }

  friend bool operator==(const ArgValue&, const ArgValue&) = default;
};

/// Reference to a registered adaptation behavior plus its bound arguments.
struct AdaptationRef {
  std::string name;
  std::map<std::string, ArgValue> args;

  friend bool operator==(const AdaptationRef&, const AdaptationRef&) = default;
};

struct AdaptationBinding {
  AdaptationCondition condition;
  AdaptationRule rule;
  AdaptationRef adaptation;
  int priority = 0;          // lower executes earlier
  int declarationIndex = 0;  // document order within the strategy
};

struct SimpleAdaptationStrategy {
  std::string name;
  std::vector<AdaptationBinding> bindings;
};

/// Arguments as seen by a behavior, with literals and context paths already
/// resolved.
class BoundArgs {
 public:
  explicit BoundArgs(std::map<std::string, Value> values = {}) : values_(std::move(values)) {}

  const Value* find(const std::string& name) const {
    const auto it = values_.find(name);
    return it == values_.end() ? nullptr : &it->second;
  }

  double number_or(const std::string& name, double fallback) const {
    const auto* v = find(name);
    return v != nullptr && v->is_number() ? v->get<double>() : fallback;
  }

  std::string string_or(const std::string& name, std::string fallback) const {
    const auto* v = find(name);
    return v != nullptr && v->is_string() ? v->get<std::string>() : std::move(fallback);
  }

 private:
  std::map<std::string, Value> values_;
};

using ProceedFn = std::function<Json(Json)>;

/// A registered adaptation behavior. Each advice slot it fills states how it
/// may be woven:
///   before:  request -> request
///   after:   response -> response
///   around:  (request, proceed) -> response
///   replace: request -> response, the core handler never runs
/// Behaviors must be reentrant; all state arrives through the arguments.
struct AdaptationBehavior {
  std::function<Json(Json, const BoundArgs&, const ContextAccessor&)> before;
  std::function<Json(Json, const BoundArgs&, const ContextAccessor&)> after;
  std::function<Json(Json, const ProceedFn&, const BoundArgs&, const ContextAccessor&)> around;
  std::function<Json(Json, const BoundArgs&, const ContextAccessor&)> replace;

  bool supports(AdviceKind kind) const;
};

/// Write-once table of adaptation behaviors, keyed by name.
class AdaptationRegistry {
 public:
  void register_adaptation(const std::string& name, AdaptationBehavior behavior);
  const AdaptationBehavior* find(const std::string& name) const;

 private:
  std::map<std::string, AdaptationBehavior> behaviors_;
};

/// Empty iff every condition path exists in the model, every adaptation name
/// resolves in the registry (and supports the rule's advice kind), and every
/// path-valued argument names a model parameter.
std::vector<Diagnostic> validate_strategy(const SimpleAdaptationStrategy& strategy,
                                          const ContextModel& model,
                                          const AdaptationRegistry& registry);

}  // namespace acas
