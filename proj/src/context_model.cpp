#include "acas/context_model.hpp"

#include <set>

namespace acas {

const char* to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::Simple: return "simple";
    case ParamKind::Derived: return "derived";
    case ParamKind::Complex: return "complex";
  }
  return "unknown";
}

ParamKind param_kind_from_string(const std::string& name) {
  if (name == "simple") return ParamKind::Simple;
  if (name == "derived") return ParamKind::Derived;
  if (name == "complex") return ParamKind::Complex;
  throw AcasError(ErrorCode::ParseError, "unknown parameter kind '" + name + "'", name);
}

void DerivationRegistry::add(const std::string& name, Function fn) {
  if (!functions_.emplace(name, std::move(fn)).second) {
    throw AcasError(ErrorCode::DuplicateId, "derivation function already registered: " + name, name);
  }
}

const DerivationRegistry::Function* DerivationRegistry::find(const std::string& name) const {
  const auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

DerivationRegistry DerivationRegistry::with_builtins() {
  DerivationRegistry registry;
  registry.add("greatCircleDistanceKm", [](const std::vector<Value>& inputs) -> Value {
    if (inputs.size() != 2) {
      throw AcasError(ErrorCode::TypeMismatch, "greatCircleDistanceKm expects two geo inputs");
    }
    return great_circle_distance_km(GeoValue::from_value(inputs[0]),
                                    GeoValue::from_value(inputs[1]));
  });
  return registry;
}

bool is_valid_path(const std::string& path) {
  if (path.empty()) return false;
  bool segmentStart = true;
  for (const char c : path) {
    if (segmentStart) {
      if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) return false;
      segmentStart = false;
    } else if (c == '.') {
      segmentStart = true;
    } else if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
      return false;
    }
  }
  return !segmentStart;
}

namespace {

void collect(const SubContext& sc, std::vector<const ParameterDescriptor*>& out) {
  for (const auto& cat : sc.categories) {
    for (const auto& p : cat.parameters) out.push_back(&p);
  }
  for (const auto& p : sc.parameters) out.push_back(&p);
  for (const auto& child : sc.children) collect(child, out);
}

void check_descriptor(const ParameterDescriptor& p, std::vector<Diagnostic>& out) {
  if (!is_valid_path(p.path)) {
    out.push_back({p.path, "path syntax", "parameter path is not a dotted identifier"});
  }
  if ((p.kind == ParamKind::Derived) != p.derivation.has_value()) {
    out.push_back({p.path, "kind/derivation coupling",
                   "derivation must be present exactly for derived parameters"});
  }
  if ((p.kind == ParamKind::Complex) != !p.representations.empty()) {
    out.push_back({p.path, "kind/representation coupling",
                   "representations must be non-empty exactly for complex parameters"});
  }
}

void check_names(const SubContext& sc, std::vector<Diagnostic>& out) {
  std::set<std::string> categoryNames;
  for (const auto& cat : sc.categories) {
    if (!categoryNames.insert(cat.name).second) {
      out.push_back({sc.name + "/" + cat.name, "duplicate category",
                     "category names must be unique within a sub-context"});
    }
  }
  std::set<std::string> childNames;
  for (const auto& child : sc.children) {
    if (!childNames.insert(child.name).second) {
      out.push_back({sc.name + "/" + child.name, "duplicate sub-context",
                     "sibling sub-context names must be unique"});
    }
    check_names(child, out);
  }
}

}  // namespace

const ParameterDescriptor* ContextModel::find(const std::string& path) const {
  for (const auto* p : all_parameters()) {
    if (p->path == path) return p;
  }
  return nullptr;
}

std::vector<const ParameterDescriptor*> ContextModel::all_parameters() const {
  std::vector<const ParameterDescriptor*> out;
  for (const auto& sc : subContexts) collect(sc, out);
  for (const auto& e : entities) {
    for (const auto& p : e.parameters) out.push_back(&p);
  }
  return out;
}

std::vector<Diagnostic> validate_model(const ContextModel& model,
                                       const DerivationRegistry& derivations) {
  std::vector<Diagnostic> out;

  const auto params = model.all_parameters();
  std::map<std::string, const ParameterDescriptor*> byPath;
  for (const auto* p : params) {
    check_descriptor(*p, out);
    if (!byPath.emplace(p->path, p).second) {
      out.push_back({p->path, "duplicate path", "parameter paths must be globally unique"});
    }
  }

  std::set<std::string> subContextNames;
  for (const auto& sc : model.subContexts) {
    if (!subContextNames.insert(sc.name).second) {
      out.push_back({sc.name, "duplicate sub-context", "top-level sub-context names must be unique"});
    }
    check_names(sc, out);
  }
  std::set<std::string> entityNames;
  for (const auto& e : model.entities) {
    if (!entityNames.insert(e.name).second) {
      out.push_back({e.name, "duplicate entity", "entity names must be unique per model"});
    }
  }

  // Derivation inputs must resolve to descriptors and form an acyclic graph.
  for (const auto* p : params) {
    if (!p->derivation) continue;
    if (!derivations.find(p->derivation->function)) {
      out.push_back({p->path, "unknown derivation function",
                     "function '" + p->derivation->function + "' is not registered"});
    }
    for (const auto& input : p->derivation->inputs) {
      if (byPath.find(input) == byPath.end()) {
        out.push_back({p->path, "unknown derivation input",
                       "input path '" + input + "' is not declared in the model"});
      }
    }
  }

  // Cycle detection over the derivation graph, three-color DFS.
  std::map<std::string, int> state;  // 0 unvisited, 1 in progress, 2 done
  std::function<bool(const std::string&)> visit = [&](const std::string& path) -> bool {
    auto& s = state[path];
    if (s == 1) return false;
    if (s == 2) return true;
    s = 1;
    const auto it = byPath.find(path);
    if (it != byPath.end() && it->second->derivation) {
      for (const auto& input : it->second->derivation->inputs) {
        if (!visit(input)) {
          s = 2;
          return false;
        }
      }
    }
    s = 2;
    return true;
  };
  for (const auto* p : params) {
    if (p->derivation && !visit(p->path)) {
      out.push_back({p->path, "derivation cycle", "derivation inputs form a cycle"});
    }
  }

  return out;
}

}  // namespace acas
