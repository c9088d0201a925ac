#include "acas/providers.hpp"

#include <algorithm>

namespace acas {

const char* to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::Context: return "contextProvider";
    case ProviderKind::Entity: return "entityProvider";
    case ProviderKind::Parameter: return "parameterProvider";
  }
  return "unknown";
}

const char* to_string(Locality locality) {
  return locality == Locality::Local ? "local" : "remote";
}

const char* to_string(ProviderMode mode) {
  return mode == ProviderMode::Query ? "query" : "notification";
}

namespace {
TimePoint default_now() { return Clock::now(); }
}  // namespace

SettableSource::SettableSource(std::function<TimePoint()> clock)
    : clock_(clock ? std::move(clock) : default_now) {}

void SettableSource::set(const std::string& path, Value value) {
  std::lock_guard lock(mutex_);
  values_[path] = {std::move(value), clock_()};
}

void SettableSource::unset(const std::string& path) {
  std::lock_guard lock(mutex_);
  values_.erase(path);
}

std::optional<std::pair<Value, TimePoint>> SettableSource::get(const std::string& path) {
  if (failing_) {
    throw AcasError(ErrorCode::ProviderUnreachable, "source forced to fail for " + path, path);
  }
  std::lock_guard lock(mutex_);
  const auto it = values_.find(path);
  if (it == values_.end()) return std::nullopt;
  // Queries observe the current value with a fresh timestamp.
  return std::make_pair(it->second.first, clock_());
}

StubTransport::StubTransport(std::function<TimePoint()> clock)
    : clock_(clock ? std::move(clock) : default_now) {}

void StubTransport::set(const std::string& path, Value value) {
  std::lock_guard lock(mutex_);
  values_[path] = std::move(value);
}

void StubTransport::unset(const std::string& path) {
  std::lock_guard lock(mutex_);
  values_.erase(path);
}

Transport::Response StubTransport::send(const std::string& providerId, const std::string& path) {
  (void)providerId;
  if (down_) return {Response::Status::Unreachable, Value(), ""};
  std::lock_guard lock(mutex_);
  const auto it = values_.find(path);
  if (it == values_.end()) return {Response::Status::NoValue, Value(), ""};
  return {Response::Status::Ok, it->second, to_iso8601(clock_())};
}

std::optional<std::pair<Value, TimePoint>> RemoteSource::get(const std::string& path) {
  const auto response = transport_->send(providerId_, path);
  switch (response.status) {
    case Transport::Response::Status::Ok:
      return std::make_pair(response.value, from_iso8601(response.timestamp));
    case Transport::Response::Status::NoValue:
      return std::nullopt;
    case Transport::Response::Status::Unreachable:
      throw AcasError(ErrorCode::ProviderUnreachable,
                      "remote provider " + providerId_ + " unreachable for " + path, providerId_);
  }
  return std::nullopt;
}

ProviderRegistry::ProviderRegistry(std::function<TimePoint()> clock)
    : clock_(clock ? std::move(clock) : default_now) {}

ProviderRegistry::ProviderState* ProviderRegistry::state(const std::string& providerId) {
  for (auto& provider : providers_) {
    if (provider->descriptor.id == providerId) return provider.get();
  }
  return nullptr;
}

const ProviderRegistry::ProviderState* ProviderRegistry::state(const std::string& providerId) const {
  for (const auto& provider : providers_) {
    if (provider->descriptor.id == providerId) return provider.get();
  }
  return nullptr;
}

std::string ProviderRegistry::register_provider(ProviderDescriptor descriptor,
                                                std::shared_ptr<ValueSource> source) {
  std::unique_lock lock(mutex_);
  if (state(descriptor.id) != nullptr) {
    throw AcasError(ErrorCode::DuplicateId, "provider id already registered: " + descriptor.id,
                    descriptor.id);
  }
  if (descriptor.kind == ProviderKind::Context && descriptor.aggregates.empty()) {
    throw AcasError(ErrorCode::UnknownAggregate,
                    "context provider must aggregate at least one provider", descriptor.id);
  }
  // Aggregated and used providers must pre-exist, which keeps both relations
  // acyclic by construction.
  std::map<std::string, const std::set<std::string>*> siblingPaths;
  for (const auto& aggregateId : descriptor.aggregates) {
    const auto* aggregate = state(aggregateId);
    if (aggregate == nullptr) {
      throw AcasError(ErrorCode::UnknownAggregate,
                      "aggregated provider not registered: " + aggregateId, aggregateId);
    }
    siblingPaths.emplace(aggregateId, &aggregate->descriptor.suppliesPaths);
  }
  for (const auto& usedId : descriptor.usesOrDerivesFrom) {
    if (state(usedId) == nullptr) {
      throw AcasError(ErrorCode::UnknownAggregate,
                      "usesOrDerivesFrom provider not registered: " + usedId, usedId);
    }
  }
  // Sibling suppliesPaths under one context provider must be disjoint.
  std::map<std::string, std::string> owner;
  for (const auto& [aggregateId, paths] : siblingPaths) {
    for (const auto& path : *paths) {
      const auto [it, inserted] = owner.emplace(path, aggregateId);
      if (!inserted) {
        throw AcasError(ErrorCode::PathConflict,
                        "path '" + path + "' supplied by both " + it->second + " and " + aggregateId,
                        path);
      }
    }
  }

  auto providerState = std::make_unique<ProviderState>();
  providerState->descriptor = std::move(descriptor);
  providerState->source = std::move(source);
  providers_.push_back(std::move(providerState));
  return providers_.back()->descriptor.id;
}

const ProviderDescriptor* ProviderRegistry::find(const std::string& providerId) const {
  std::shared_lock lock(mutex_);
  const auto* provider = state(providerId);
  return provider ? &provider->descriptor : nullptr;
}

const ProviderDescriptor* ProviderRegistry::provider_for_path(const std::string& path) const {
  std::shared_lock lock(mutex_);
  for (const auto& provider : providers_) {
    if (provider->descriptor.suppliesPaths.count(path) != 0) return &provider->descriptor;
  }
  return nullptr;
}

std::pair<Value, TimePoint> ProviderRegistry::query(const std::string& providerId,
                                                    const std::string& path) {
  std::shared_lock lock(mutex_);
  auto* provider = state(providerId);
  if (provider == nullptr) {
    throw AcasError(ErrorCode::UnknownService, "provider not registered: " + providerId, providerId);
  }
  if (provider->descriptor.interface.mode != ProviderMode::Query) {
    throw AcasError(ErrorCode::WrongMode, "provider " + providerId + " is notification-based",
                    providerId);
  }
  if (provider->descriptor.suppliesPaths.count(path) == 0) {
    throw AcasError(ErrorCode::UnknownPath, "provider " + providerId + " does not supply " + path,
                    path);
  }
  if (provider->source == nullptr) {
    throw AcasError(ErrorCode::Unavailable, "provider " + providerId + " has no value source", path);
  }
  const auto value = provider->source->get(path);
  if (!value) throw UnavailableError(path);
  return *value;
}

void ProviderRegistry::publish(const std::string& providerId, const std::string& path, Value value) {
  std::shared_lock lock(mutex_);
  auto* provider = state(providerId);
  if (provider == nullptr) {
    throw AcasError(ErrorCode::UnknownService, "provider not registered: " + providerId, providerId);
  }
  if (provider->descriptor.interface.mode != ProviderMode::Notification) {
    throw AcasError(ErrorCode::WrongMode, "provider " + providerId + " is query-based", providerId);
  }
  if (provider->descriptor.suppliesPaths.count(path) == 0) {
    throw AcasError(ErrorCode::UnknownPath, "provider " + providerId + " does not supply " + path,
                    path);
  }
  const TimePoint stamp = clock_();
  // The provider mutex is held across the cache update and the deliveries:
  // publishes are serialized per provider and a subscription never sees
  // overlapping handler calls. Handlers must not publish back into the same
  // provider.
  std::lock_guard providerLock(provider->mutex);
  provider->latest[path] = {value, stamp};
  for (const auto& sub : provider->subscriptions) {
    if (sub.path == path) {
      sub.delivered->fetch_add(1);
      sub.handler(path, value, stamp);
    }
  }
}

void ProviderRegistry::retract(const std::string& providerId, const std::string& path) {
  std::shared_lock lock(mutex_);
  auto* provider = state(providerId);
  if (provider == nullptr) {
    throw AcasError(ErrorCode::UnknownService, "provider not registered: " + providerId, providerId);
  }
  std::lock_guard providerLock(provider->mutex);
  provider->latest.erase(path);
}

Subscription ProviderRegistry::subscribe(const std::string& providerId, const std::string& path,
                                         SubscriptionHandler handler) {
  std::shared_lock lock(mutex_);
  auto* provider = state(providerId);
  if (provider == nullptr) {
    throw AcasError(ErrorCode::UnknownService, "provider not registered: " + providerId, providerId);
  }
  if (provider->descriptor.interface.mode != ProviderMode::Notification) {
    throw AcasError(ErrorCode::WrongMode, "provider " + providerId + " is query-based", providerId);
  }
  Subscription subscription;
  subscription.id = nextSubscriptionId_.fetch_add(1);
  subscription.providerId = providerId;
  subscription.path = path;
  subscription.delivered = std::make_shared<std::atomic<std::uint64_t>>(0);
  std::lock_guard providerLock(provider->mutex);
  provider->subscriptions.push_back({subscription.id, path, std::move(handler),
                                     subscription.delivered});
  return subscription;
}

void ProviderRegistry::unsubscribe(const Subscription& subscription) {
  std::shared_lock lock(mutex_);
  auto* provider = state(subscription.providerId);
  if (provider == nullptr) return;
  std::lock_guard providerLock(provider->mutex);
  auto& subs = provider->subscriptions;
  subs.erase(std::remove_if(subs.begin(), subs.end(),
                            [&](const auto& sub) { return sub.id == subscription.id; }),
             subs.end());
}

void ProviderRegistry::collect_leaves(const ProviderState& provider,
                                      std::vector<const ProviderState*>& leaves) const {
  if (provider.descriptor.kind == ProviderKind::Context) {
    for (const auto& aggregateId : provider.descriptor.aggregates) {
      if (const auto* aggregate = state(aggregateId)) collect_leaves(*aggregate, leaves);
    }
  } else {
    leaves.push_back(&provider);
  }
}

SnapshotPtr ProviderRegistry::snapshot(const std::string& serviceId) const {
  std::shared_lock lock(mutex_);
  const auto* contextProvider = state(serviceId);
  if (contextProvider == nullptr || contextProvider->descriptor.kind != ProviderKind::Context) {
    throw AcasError(ErrorCode::UnknownService,
                    "no context provider registered for service: " + serviceId, serviceId);
  }

  std::vector<const ProviderState*> leaves;
  collect_leaves(*contextProvider, leaves);

  std::map<std::string, SnapshotEntry> entries;
  for (const auto* provider : leaves) {
    const auto& descriptor = provider->descriptor;
    if (descriptor.interface.mode == ProviderMode::Query) {
      for (const auto& path : descriptor.suppliesPaths) {
        if (provider->source == nullptr) continue;
        try {
          if (const auto value = provider->source->get(path)) {
            entries[path] = {value->first, descriptor.id, value->second};
          }
        } catch (const AcasError&) {
          // Degrade: a failing provider just leaves its paths unavailable.
        }
      }
    } else {
      std::lock_guard providerLock(provider->mutex);
      for (const auto& [path, value] : provider->latest) {
        entries[path] = {value.first, descriptor.id, value.second};
      }
    }
  }

  if (model_ != nullptr) {
    for (auto it = entries.begin(); it != entries.end();) {
      if (model_->find(it->first) == nullptr) {
        it = entries.erase(it);
      } else {
        ++it;
      }
    }
  }

  return std::make_shared<ContextSnapshot>(serviceId, clock_(), std::move(entries));
}

}  // namespace acas
