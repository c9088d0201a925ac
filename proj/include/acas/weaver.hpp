#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "acas/cas.hpp"
#include "acas/providers.hpp"

namespace acas {

/// A core service: pure business handlers, one per operation name. Handlers
/// never see the context; adaptations reach it through bound arguments and
/// the snapshot.
struct CoreService {
  std::string serviceId;
  std::map<std::string, std::function<Json(const Json&)>> operations;
};

class ServiceRegistry {
 public:
  void add(CoreService service);
  const CoreService* find(const std::string& serviceId) const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, CoreService> services_;
};

struct TraceRecord {
  std::string strategy;
  int bindingIndex = 0;
  std::string condition;  // "true", "false" or "skipped:<reason>"
  bool applied = false;
};

struct WeaveTrace {
  std::vector<TraceRecord> records;

  /// One line per record:
  /// `strategy=<name> binding=<i> condition=<true|false|skipped:reason> applied=<bool>`
  std::string to_text() const;
};

/// One binding selected into the woven chain, with its behavior resolved.
struct ActiveBinding {
  std::string strategyName;
  std::string adaptationName;
  const AdaptationBehavior* behavior = nullptr;
  AdviceKind advice = AdviceKind::After;
  AdaptationRule rule;
  std::map<std::string, ArgValue> args;
  int priority = 0;
  int declarationIndex = 0;
  int strategyOrdinal = 0;
};

/// The ContextViewService: the core handler plus the adaptation chain woven
/// for one snapshot. Immutable; safe to cache and share.
class WovenService {
 public:
  /// `owner` keeps the CAS document (and with it the model) alive while this
  /// woven service is cached or in flight across a bundle replacement.
  WovenService(const CoreService* core, std::vector<ActiveBinding> bindings,
               std::shared_ptr<const CasDocument> owner, const ContextModel* model,
               SnapshotPtr snapshot, const DerivationRegistry* derivations);

  /// Runs the chain: before-behaviors in sort order transform the request,
  /// around-behaviors nest with the earliest-sorted outermost, the center is
  /// the replace behavior when present (the core handler otherwise), and
  /// after-behaviors in sort order transform the response.
  Json invoke(const std::string& operation, Json request) const;

  const std::vector<ActiveBinding>& active_bindings() const { return bindings_; }
  const std::string& snapshot_digest() const { return snapshotDigest_; }
  const ContextSnapshot& snapshot() const { return *snapshot_; }

 private:
  const CoreService* core_;
  std::vector<ActiveBinding> bindings_;  // sorted by (priority, declIndex, strategy)
  std::shared_ptr<const CasDocument> owner_;
  const ContextModel* model_;
  SnapshotPtr snapshot_;
  const DerivationRegistry* derivations_;
  std::string snapshotDigest_;
};

enum class NotifyMode { Sync, Async };

struct Decision {
  std::shared_ptr<const WovenService> service;
  std::shared_ptr<const WeaveTrace> trace;
  bool cacheHit = false;
};

/// The Aspect Adaptations Weaver: Request Notifier (notify), Decision Maker
/// (select_pertinent) and Service Reconfigurator (weave) in one runtime
/// object. Async mode caches woven services keyed by (service, snapshot
/// digest); publishes on subscribed paths invalidate through invalidate().
class Weaver {
 public:
  Weaver(const ServiceRegistry& services, const AdaptationRegistry& adaptations,
         const DerivationRegistry& derivations);

  /// Activates the document's CAS for its service; replacement is atomic,
  /// in-flight invocations keep the bundle they started with.
  /// Throws UnknownService when no core service is registered.
  void register_cas(CasDocument document);

  std::shared_ptr<const CasDocument> cas_for(const std::string& serviceId) const;

  /// Sync: selects and weaves inline. Async: resolves through the digest
  /// cache, computing on a miss.
  Decision notify(const std::string& serviceId, SnapshotPtr snapshot, NotifyMode mode);

  /// Exactly the strategies whose view's effective paths all resolve in the
  /// snapshot (derived parameters resolve when their inputs do), in CAS
  /// declaration order.
  std::vector<const CVSAdaptationStrategy*> select_pertinent(const CasDocument& document,
                                                             const ContextSnapshot& snapshot) const;

  /// Evaluates conditions and assembles the sorted chain. Condition errors
  /// skip the binding with a trace record. Supernumerary replace bindings
  /// are trace-dropped, keeping the lowest-sorted one. `owner`, when given,
  /// keeps the document alive for the woven service's lifetime; callers
  /// passing a plain reference must outlive the result themselves.
  Decision weave(const CoreService& core, const CasDocument& document,
                 const std::vector<const CVSAdaptationStrategy*>& selected, SnapshotPtr snapshot,
                 std::shared_ptr<const CasDocument> owner = nullptr) const;

  /// Drops the async cache for a service. Wire as a subscription handler on
  /// notification providers so context changes re-weave on the next request.
  void invalidate(const std::string& serviceId);

  struct CacheStats {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t invalidations = 0;
  };
  CacheStats cache_stats() const;

 private:
  const ServiceRegistry& services_;
  const AdaptationRegistry& adaptations_;
  const DerivationRegistry& derivations_;

  mutable std::shared_mutex casMutex_;
  std::map<std::string, std::shared_ptr<const CasDocument>> casBundles_;

  mutable std::mutex cacheMutex_;
  std::map<std::string, std::map<std::string, Decision>> cache_;  // service -> digest -> decision
  CacheStats stats_;
};

}  // namespace acas
