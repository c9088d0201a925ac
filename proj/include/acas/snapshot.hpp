#pragma once

#include <map>
#include <memory>
#include <string>

#include "acas/context_model.hpp"

namespace acas {

struct SnapshotEntry {
  Value value;
  std::string sourceProviderId;
  TimePoint sourceTimestamp;
};

/// Immutable per-request view of the context. Safe to share across threads.
class ContextSnapshot {
 public:
  ContextSnapshot(std::string serviceId, TimePoint capturedAt,
                  std::map<std::string, SnapshotEntry> entries)
      : serviceId_(std::move(serviceId)), capturedAt_(capturedAt), entries_(std::move(entries)) {}

  const std::string& service_id() const { return serviceId_; }
  TimePoint captured_at() const { return capturedAt_; }
  const std::map<std::string, SnapshotEntry>& entries() const { return entries_; }

  const SnapshotEntry* find(const std::string& path) const;

  /// Returns the stored value, throws UnavailableError when absent.
  const Value& resolve(const std::string& path) const;

  /// Hash over the (path, value) pairs; timestamps and provenance excluded so
  /// that two captures of the same context state share a digest.
  std::string digest() const;

 private:
  std::string serviceId_;
  TimePoint capturedAt_;
  std::map<std::string, SnapshotEntry> entries_;
};

using SnapshotPtr = std::shared_ptr<const ContextSnapshot>;

/// Resolution layer over a snapshot: plain entries come straight from the
/// snapshot, derived parameters are computed lazily from the model's
/// derivation specs at resolve time.
class ContextAccessor {
 public:
  ContextAccessor(const ContextModel* model, const ContextSnapshot& snapshot,
                  const DerivationRegistry* derivations)
      : model_(model), snapshot_(&snapshot), derivations_(derivations) {}

  /// Throws UnavailableError when neither stored nor derivable.
  Value resolve(const std::string& path) const;

  bool can_resolve(const std::string& path) const;

  const ContextSnapshot& snapshot() const { return *snapshot_; }
  const ContextModel* model() const { return model_; }
  const DerivationRegistry* derivations() const { return derivations_; }

 private:
  const ContextModel* model_;           // may be null: raw snapshot access only
  const ContextSnapshot* snapshot_;
  const DerivationRegistry* derivations_;  // may be null
};

/// Applies the descriptor's derivation function to its resolved inputs.
/// Deterministic for a fixed snapshot.
Value compute_derived(const ParameterDescriptor& descriptor, const ContextAccessor& context);

}  // namespace acas
