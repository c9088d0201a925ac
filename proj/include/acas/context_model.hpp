#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "acas/value.hpp"

namespace acas {

/// Recipe for a derived parameter: a registered function applied to the
/// values of other parameters.
struct DerivationSpec {
  std::string function;
  std::vector<std::string> inputs;

  friend bool operator==(const DerivationSpec&, const DerivationSpec&) = default;
};

enum class ParamKind { Simple, Derived, Complex };

const char* to_string(ParamKind kind);
ParamKind param_kind_from_string(const std::string& name);

struct ParameterDescriptor {
  std::string path;  // dotted, globally unique within a model
  ParamKind kind = ParamKind::Simple;
  ValueType valueType = ValueType::String;
  std::string unit;  // optional, empty when absent
  std::vector<std::string> representations;  // complex only
  std::optional<DerivationSpec> derivation;  // derived only

  friend bool operator==(const ParameterDescriptor&, const ParameterDescriptor&) = default;
};

struct Category {
  std::string name;
  std::vector<ParameterDescriptor> parameters;

  friend bool operator==(const Category&, const Category&) = default;
};

struct SubContext {
  std::string name;
  std::vector<Category> categories;
  std::vector<ParameterDescriptor> parameters;
  std::vector<SubContext> children;

  friend bool operator==(const SubContext&, const SubContext&) = default;
};

struct Entity {
  std::string name;
  std::vector<ParameterDescriptor> parameters;

  friend bool operator==(const Entity&, const Entity&) = default;
};

/// Table of named derivation functions. Populated once at startup and read
/// concurrently afterwards.
class DerivationRegistry {
 public:
  using Function = std::function<Value(const std::vector<Value>&)>;

  void add(const std::string& name, Function fn);
  const Function* find(const std::string& name) const;

  /// Ships greatCircleDistanceKm(geoA, geoB).
  static DerivationRegistry with_builtins();

 private:
  std::map<std::string, Function> functions_;
};

struct ContextModel {
  std::string name;
  std::vector<SubContext> subContexts;
  std::vector<Entity> entities;

  /// Looks a descriptor up by its dotted path, nullptr when absent.
  const ParameterDescriptor* find(const std::string& path) const;

  /// All descriptors in declaration order (sub-contexts first, then entities).
  std::vector<const ParameterDescriptor*> all_parameters() const;

  friend bool operator==(const ContextModel&, const ContextModel&) = default;
};

/// Checks every model invariant: path uniqueness, name uniqueness, the
/// kind/derivation/representation couplings, derivation input existence and
/// acyclicity, and function resolvability. Returns an empty list when well
/// formed.
std::vector<Diagnostic> validate_model(const ContextModel& model,
                                       const DerivationRegistry& derivations);

bool is_valid_path(const std::string& path);

}  // namespace acas
