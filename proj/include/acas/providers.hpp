#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "acas/snapshot.hpp"

namespace acas {

enum class ProviderKind { Context, Entity, Parameter };
enum class Locality { Local, Remote };
enum class ProviderMode { Query, Notification };

const char* to_string(ProviderKind kind);
const char* to_string(Locality locality);
const char* to_string(ProviderMode mode);

struct ProviderInterface {
  Locality locality = Locality::Local;
  ProviderMode mode = ProviderMode::Query;
};

struct ProviderDescriptor {
  std::string id;
  ProviderKind kind = ProviderKind::Parameter;
  std::set<std::string> suppliesPaths;
  ProviderInterface interface;
  std::vector<std::string> aggregates;          // context providers only
  std::vector<std::string> usesOrDerivesFrom;   // metadata, no execution semantics
};

/// Backing value source for query-mode providers (a simulated sensor, a
/// settable fixture, a remote transport adapter).
class ValueSource {
 public:
  virtual ~ValueSource() = default;

  /// nullopt means "no value right now"; throw AcasError(ProviderUnreachable)
  /// for a failing source.
  virtual std::optional<std::pair<Value, TimePoint>> get(const std::string& path) = 0;
};

/// In-memory settable source used for simulated local sensors.
class SettableSource : public ValueSource {
 public:
  explicit SettableSource(std::function<TimePoint()> clock = {});

  void set(const std::string& path, Value value);
  void unset(const std::string& path);
  void set_failing(bool failing) { failing_ = failing; }

  std::optional<std::pair<Value, TimePoint>> get(const std::string& path) override;

 private:
  std::function<TimePoint()> clock_;
  mutable std::mutex mutex_;
  std::map<std::string, std::pair<Value, TimePoint>> values_;
  std::atomic<bool> failing_{false};
};

/// Request/response transport used by remote providers. A request addresses
/// (providerId, path); the response carries the value and an ISO-8601
/// timestamp, or a failure code.
class Transport {
 public:
  struct Response {
    enum class Status { Ok, NoValue, Unreachable };
    Status status = Status::NoValue;
    Value value;
    std::string timestamp;  // ISO-8601, Ok only
  };

  virtual ~Transport() = default;
  virtual Response send(const std::string& providerId, const std::string& path) = 0;
};

/// In-process transport stub. Values and failure behavior are configured by
/// scenario fixtures.
class StubTransport : public Transport {
 public:
  explicit StubTransport(std::function<TimePoint()> clock = {});

  void set(const std::string& path, Value value);
  void unset(const std::string& path);
  void set_down(bool down) { down_ = down; }

  Response send(const std::string& providerId, const std::string& path) override;

 private:
  std::function<TimePoint()> clock_;
  mutable std::mutex mutex_;
  std::map<std::string, Value> values_;
  std::atomic<bool> down_{false};
};

/// Adapter exposing a Transport as a query-mode value source.
class RemoteSource : public ValueSource {
 public:
  RemoteSource(std::shared_ptr<Transport> transport, std::string providerId)
      : transport_(std::move(transport)), providerId_(std::move(providerId)) {}

  std::optional<std::pair<Value, TimePoint>> get(const std::string& path) override;

 private:
  std::shared_ptr<Transport> transport_;
  std::string providerId_;
};

struct Subscription {
  std::uint64_t id = 0;
  std::string providerId;
  std::string path;
  std::shared_ptr<std::atomic<std::uint64_t>> delivered;  // one increment per publish

  std::uint64_t delivered_count() const { return delivered ? delivered->load() : 0; }
};

using SubscriptionHandler = std::function<void(const std::string& path, const Value&, TimePoint)>;

/// Provider registry plus the Context Manager: assembles one immutable
/// snapshot per request from all providers aggregated under the service's
/// context provider. Registration order is kept for deterministic iteration;
/// individual provider failures degrade the snapshot instead of failing it.
class ProviderRegistry {
 public:
  explicit ProviderRegistry(std::function<TimePoint()> clock = {});

  /// Errors: DuplicateId, UnknownAggregate, PathConflict.
  std::string register_provider(ProviderDescriptor descriptor,
                                std::shared_ptr<ValueSource> source = nullptr);

  const ProviderDescriptor* find(const std::string& providerId) const;

  /// First registered provider whose suppliesPaths contains the path.
  const ProviderDescriptor* provider_for_path(const std::string& path) const;

  /// Query-mode providers only; polls the source now.
  std::pair<Value, TimePoint> query(const std::string& providerId, const std::string& path);

  /// Notification-mode providers only; value becomes the provider's latest
  /// and every subscription on the path is delivered exactly once, in
  /// subscription-registration order.
  void publish(const std::string& providerId, const std::string& path, Value value);

  /// Removes a notification provider's cached value without a delivery.
  void retract(const std::string& providerId, const std::string& path);

  Subscription subscribe(const std::string& providerId, const std::string& path,
                         SubscriptionHandler handler);
  void unsubscribe(const Subscription& subscription);

  /// The Context Manager entry point. The serviceId names its context
  /// provider. Throws AcasError(UnknownService) when none is registered.
  SnapshotPtr snapshot(const std::string& serviceId) const;

  /// Snapshot entries are restricted to paths declared in this model once
  /// set (entries outside the model are dropped).
  void set_model(const ContextModel* model) { model_ = model; }

 private:
  struct ProviderState {
    ProviderDescriptor descriptor;
    std::shared_ptr<ValueSource> source;
    std::map<std::string, std::pair<Value, TimePoint>> latest;  // notification cache
    struct Sub {
      std::uint64_t id;
      std::string path;
      SubscriptionHandler handler;
      std::shared_ptr<std::atomic<std::uint64_t>> delivered;
    };
    std::vector<Sub> subscriptions;
    mutable std::mutex mutex;  // serializes publish/retract per provider
  };

  ProviderState* state(const std::string& providerId);
  const ProviderState* state(const std::string& providerId) const;
  void collect_leaves(const ProviderState& provider,
                      std::vector<const ProviderState*>& leaves) const;

  std::function<TimePoint()> clock_;
  mutable std::shared_mutex mutex_;  // guards the provider table
  std::vector<std::unique_ptr<ProviderState>> providers_;  // registration order
  std::atomic<std::uint64_t> nextSubscriptionId_{1};
  const ContextModel* model_ = nullptr;
};

}  // namespace acas
