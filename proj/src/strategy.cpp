#include "acas/strategy.hpp"

namespace acas {

const char* to_string(AdviceKind kind) {
  switch (kind) {
    case AdviceKind::Before: return "before";
    case AdviceKind::After: return "after";
    case AdviceKind::Around: return "around";
    case AdviceKind::Replace: return "replace";
  }
  return "unknown";
}

AdviceKind advice_kind_from_string(const std::string& name) {
  if (name == "before") return AdviceKind::Before;
  if (name == "after") return AdviceKind::After;
  if (name == "around") return AdviceKind::Around;
  if (name == "replace") return AdviceKind::Replace;
  throw AcasError(ErrorCode::ParseError, "unknown advice kind '" + name + "'", name);
}

bool AdaptationBehavior::supports(AdviceKind kind) const {
  switch (kind) {
    case AdviceKind::Before: return static_cast<bool>(before);
    case AdviceKind::After: return static_cast<bool>(after);
    case AdviceKind::Around: return static_cast<bool>(around);
    case AdviceKind::Replace: return static_cast<bool>(replace);
  }
  return false;
}

void AdaptationRegistry::register_adaptation(const std::string& name, AdaptationBehavior behavior) {
  if (!behaviors_.emplace(name, std::move(behavior)).second) {
    throw AcasError(ErrorCode::DuplicateAdaptation, "adaptation already registered: " + name, name);
  }
}

const AdaptationBehavior* AdaptationRegistry::find(const std::string& name) const {
  const auto it = behaviors_.find(name);
  return it == behaviors_.end() ? nullptr : &it->second;
}

std::vector<Diagnostic> validate_strategy(const SimpleAdaptationStrategy& strategy,
                                          const ContextModel& model,
                                          const AdaptationRegistry& registry) {
  std::vector<Diagnostic> out;
  if (strategy.bindings.empty()) {
    out.push_back({strategy.name, "empty strategy", "a strategy aggregates at least one binding"});
  }
  for (std::size_t i = 0; i < strategy.bindings.size(); ++i) {
    const auto& binding = strategy.bindings[i];
    const std::string subject = strategy.name + "/binding[" + std::to_string(i) + "]";

    if (binding.condition.ast) {
      for (const auto& path : all_paths(*binding.condition.ast)) {
        if (model.find(path) == nullptr) {
          out.push_back({subject, "unknown condition path",
                         "path '" + path + "' is not declared in the context model"});
        }
      }
    } else {
      out.push_back({subject, "missing condition", "binding carries no parsed condition"});
    }

    const auto* behavior = registry.find(binding.adaptation.name);
    if (behavior == nullptr) {
      out.push_back({subject, "unknown adaptation",
                     "adaptation '" + binding.adaptation.name + "' is not registered"});
    } else if (!behavior->supports(binding.rule.advice)) {
      out.push_back({subject, "unsupported advice kind",
                     "adaptation '" + binding.adaptation.name + "' does not provide " +
                         to_string(binding.rule.advice) + " advice"});
    }

    for (const auto& [argName, arg] : binding.adaptation.args) {
      if (arg.isPath && model.find(arg.path) == nullptr) {
        out.push_back({subject, "unresolvable argument",
                       "argument '" + argName + "' references unknown path '" + arg.path + "'"});
      }
    }
  }
  return out;
}

}  // namespace acas
