#pragma once

#include <memory>
#include <string>
#include <vector>

#include "acas/weaver.hpp"

namespace acas::demo {

struct OpenInterval {
  int start = 0;  // minute of day, inclusive
  int end = 0;    // minute of day, exclusive
};

struct Restaurant {
  std::string id;
  std::map<std::string, std::string> names;         // language code -> name
  std::map<std::string, std::string> descriptions;  // language code -> text
  std::string cuisine;
  int priceTier = 1;  // 1..4
  GeoValue location;
  std::vector<OpenInterval> openHours;
  std::string photoRef;  // empty when the fixture has no photo
};

/// Parses the restaurants.json array and checks the fixture invariants.
std::vector<Restaurant> parse_restaurants(const Json& array);

Json restaurant_to_item(const Restaurant& restaurant);

/// The unadapted core handler: substring cuisine match (case-insensitive),
/// price ceiling, dataset order, (page, pageSize) pagination with default
/// pageSize 20. Items carry every language and the photoRef.
Json search_restaurants(const std::vector<Restaurant>& dataset, const Json& request);

// The five scenario adaptation behaviors, all after-advice. Exposed as free
// functions so tests can drive them directly.
Json localize(Json response, const BoundArgs& args, const ContextAccessor& context);
Json filter_open(Json response, const BoundArgs& args, const ContextAccessor& context);
Json filter_by_distance(Json response, const BoundArgs& args, const ContextAccessor& context);
Json optimize_payload(Json response, const BoundArgs& args, const ContextAccessor& context);
Json filter_preferences(Json response, const BoundArgs& args, const ContextAccessor& context);

/// Registers the five behaviors under their document names: localize,
/// filterOpen, filterByDistance, optimizePayload, filterPreferences.
void register_demo_adaptations(AdaptationRegistry& registry);

/// The Restaurants Searching world wired end to end: core service, the
/// adaptation registry, the four simulated providers aggregated under the
/// service's context provider, the loaded CAS document, and the weaver with
/// cache invalidation subscribed to every notification path.
class DemoWorld {
 public:
  DemoWorld(const std::string& strategiesXml, const std::string& restaurantsJson,
            std::function<TimePoint()> clock = {});

  /// Routes a scenario value to whichever provider supplies the path:
  /// notification providers get a publish, local query sources are set,
  /// remote paths configure the stub transport.
  void set_context(const std::string& path, Value value);
  void unset_context(const std::string& path);

  struct CallResult {
    Json response;
    Decision decision;
  };

  /// Fresh snapshot, notify, weave, invoke.
  CallResult call(const std::string& serviceId, const std::string& operation, const Json& request,
                  NotifyMode mode = NotifyMode::Sync);

  SnapshotPtr take_snapshot() { return providers_.snapshot(serviceId_); }

  const std::string& service_id() const { return serviceId_; }
  const std::vector<Restaurant>& restaurants() const { return restaurants_; }
  const CasDocument& document() const { return *document_; }
  Weaver& weaver() { return weaver_; }
  ProviderRegistry& providers() { return providers_; }
  AdaptationRegistry& adaptations() { return adaptations_; }
  StubTransport& weather_stub() { return *weatherStub_; }
  SettableSource& time_source() { return *timeSource_; }

  static constexpr const char* kServiceId = "RestaurantsSearching";
  static constexpr const char* kDeviceProviderId = "DeviceProvider";
  static constexpr const char* kUserProviderId = "UserProvider";
  static constexpr const char* kTimeProviderId = "TimeProvider";
  static constexpr const char* kWeatherProviderId = "WeatherProvider";

 private:
  DerivationRegistry derivations_;
  AdaptationRegistry adaptations_;
  ServiceRegistry services_;
  ProviderRegistry providers_;
  Weaver weaver_;
  std::shared_ptr<const CasDocument> document_;
  std::string serviceId_;
  std::vector<Restaurant> restaurants_;
  std::shared_ptr<StubTransport> weatherStub_;
  std::shared_ptr<SettableSource> timeSource_;
  std::vector<Subscription> invalidationSubs_;
};

}  // namespace acas::demo
