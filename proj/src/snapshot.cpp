#include "acas/snapshot.hpp"

namespace acas {

const SnapshotEntry* ContextSnapshot::find(const std::string& path) const {
  const auto it = entries_.find(path);
  return it == entries_.end() ? nullptr : &it->second;
}

const Value& ContextSnapshot::resolve(const std::string& path) const {
  if (const auto* entry = find(path)) return entry->value;
  throw UnavailableError(path);
}

std::string ContextSnapshot::digest() const {
  uint64_t hash = fnv1a64(serviceId_ + "\n");
  for (const auto& [path, entry] : entries_) {
    hash = fnv1a64(path + "=" + entry.value.dump() + "\n", hash);
  }
  return to_hex(hash);
}

Value ContextAccessor::resolve(const std::string& path) const {
  if (const auto* entry = snapshot_->find(path)) return entry->value;
  if (model_ != nullptr) {
    if (const auto* descriptor = model_->find(path); descriptor && descriptor->derivation) {
      return compute_derived(*descriptor, *this);
    }
  }
  throw UnavailableError(path);
}

bool ContextAccessor::can_resolve(const std::string& path) const {
  if (snapshot_->find(path) != nullptr) return true;
  if (model_ == nullptr) return false;
  const auto* descriptor = model_->find(path);
  if (descriptor == nullptr || !descriptor->derivation) return false;
  for (const auto& input : descriptor->derivation->inputs) {
    if (input == path || !can_resolve(input)) return false;
  }
  return true;
}

Value compute_derived(const ParameterDescriptor& descriptor, const ContextAccessor& context) {
  if (!descriptor.derivation) {
    throw AcasError(ErrorCode::TypeMismatch,
                    "parameter '" + descriptor.path + "' carries no derivation", descriptor.path);
  }
  const auto* registry = context.derivations();
  const DerivationRegistry::Function* fn =
      registry ? registry->find(descriptor.derivation->function) : nullptr;
  if (fn == nullptr) {
    throw AcasError(ErrorCode::UnknownFunction,
                    "derivation function not registered: " + descriptor.derivation->function,
                    descriptor.derivation->function);
  }
  std::vector<Value> inputs;
  inputs.reserve(descriptor.derivation->inputs.size());
  for (const auto& input : descriptor.derivation->inputs) {
    inputs.push_back(context.resolve(input));
  }
  return (*fn)(inputs);
}

}  // namespace acas
