#include "acas/demo/mtourism.hpp"

#include <algorithm>
#include <cmath>

namespace acas::demo {

namespace {

std::string lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

[[noreturn]] void fixture_fail(const std::string& message) {
  throw AcasError(ErrorCode::ParseError, "restaurants fixture: " + message);
}

std::map<std::string, std::string> parse_text_map(const Json& value, const std::string& what) {
  if (!value.is_object()) fixture_fail(what + " must map language codes to strings");
  std::map<std::string, std::string> out;
  for (const auto& [lang, text] : value.items()) {
    if (!text.is_string()) fixture_fail(what + "." + lang + " must be a string");
    out[lang] = text.get<std::string>();
  }
  return out;
}

}  // namespace

std::vector<Restaurant> parse_restaurants(const Json& array) {
  if (!array.is_array()) fixture_fail("top level must be an array");
  std::vector<Restaurant> out;
  for (const auto& record : array) {
    Restaurant r;
    r.id = record.at("id").get<std::string>();
    r.names = parse_text_map(record.at("names"), r.id + ".names");
    if (r.names.empty()) fixture_fail(r.id + " needs at least one name language");
    if (record.contains("descriptions")) {
      r.descriptions = parse_text_map(record.at("descriptions"), r.id + ".descriptions");
    }
    r.cuisine = record.at("cuisine").get<std::string>();
    r.priceTier = record.at("priceTier").get<int>();
    if (r.priceTier < 1 || r.priceTier > 4) fixture_fail(r.id + " priceTier outside 1..4");
    r.location = GeoValue::from_value(record.at("location"));
    for (const auto& interval : record.at("openHours")) {
      if (!interval.is_array() || interval.size() != 2) {
        fixture_fail(r.id + " openHours entries must be [start, end]");
      }
      OpenInterval open{interval[0].get<int>(), interval[1].get<int>()};
      if (open.start < 0 || open.start >= open.end || open.end > 1440) {
        fixture_fail(r.id + " openHours must satisfy 0 <= start < end <= 1440");
      }
      r.openHours.push_back(open);
    }
    if (record.contains("photoRef")) r.photoRef = record.at("photoRef").get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

Json restaurant_to_item(const Restaurant& restaurant) {
  Json item;
  item["id"] = restaurant.id;
  item["names"] = restaurant.names;
  item["descriptions"] = restaurant.descriptions;
  item["cuisine"] = restaurant.cuisine;
  item["priceTier"] = restaurant.priceTier;
  item["location"] = restaurant.location.to_value();
  auto hours = Json::array();
  for (const auto& open : restaurant.openHours) hours.push_back({open.start, open.end});
  item["openHours"] = std::move(hours);
  if (!restaurant.photoRef.empty()) item["photoRef"] = restaurant.photoRef;
  return item;
}

Json search_restaurants(const std::vector<Restaurant>& dataset, const Json& request) {
  std::string keyword;
  if (request.contains("cuisineKeyword")) keyword = lower(request.at("cuisineKeyword").get<std::string>());
  int maxPrice = 4;
  if (request.contains("maxPrice")) maxPrice = request.at("maxPrice").get<int>();
  int page = request.value("page", 1);
  int pageSize = request.value("pageSize", 20);
  if (page < 1 || pageSize < 1) {
    throw AcasError(ErrorCode::ParseError, "search request requires page >= 1 and pageSize >= 1");
  }

  std::vector<const Restaurant*> matches;
  for (const auto& restaurant : dataset) {
    if (!keyword.empty() && lower(restaurant.cuisine).find(keyword) == std::string::npos) continue;
    if (restaurant.priceTier > maxPrice) continue;
    matches.push_back(&restaurant);
  }

  Json items = Json::array();
  const std::size_t begin = static_cast<std::size_t>(page - 1) * static_cast<std::size_t>(pageSize);
  for (std::size_t i = begin; i < matches.size() && items.size() < static_cast<std::size_t>(pageSize);
       ++i) {
    items.push_back(restaurant_to_item(*matches[i]));
  }

  Json response;
  response["items"] = std::move(items);
  response["page"] = page;
  response["pageSize"] = pageSize;
  response["totalCount"] = matches.size();
  return response;
}

namespace {

// Pick the requested language with an 'en' fallback, then any declared one.
const Json* pick_language(const Json& byLanguage, const std::string& language) {
  if (byLanguage.contains(language)) return &byLanguage.at(language);
  if (byLanguage.contains("en")) return &byLanguage.at("en");
  if (!byLanguage.empty()) return &byLanguage.begin().value();
  return nullptr;
}

template <typename Keep>
void filter_items(Json& response, Keep&& keep) {
  if (!response.contains("items") || !response["items"].is_array()) return;
  Json kept = Json::array();
  for (auto& item : response["items"]) {
    if (keep(item)) kept.push_back(std::move(item));
  }
  response["items"] = std::move(kept);
}

}  // namespace

Json localize(Json response, const BoundArgs& args, const ContextAccessor& context) {
  std::string language;
  if (const auto* arg = args.find("language"); arg != nullptr && arg->is_string()) {
    language = arg->get<std::string>();
  } else {
    language = context.resolve("user.language").get<std::string>();
  }
  if (!response.contains("items")) return response;
  for (auto& item : response["items"]) {
    if (item.contains("names")) {
      if (const auto* name = pick_language(item["names"], language)) item["name"] = *name;
      item.erase("names");
    }
    if (item.contains("descriptions")) {
      if (const auto* text = pick_language(item["descriptions"], language)) {
        item["description"] = *text;
      }
      item.erase("descriptions");
    }
  }
  return response;
}

Json filter_open(Json response, const BoundArgs& args, const ContextAccessor& context) {
  (void)args;
  const int minuteOfDay = static_cast<int>(context.resolve("environment.time").get<double>());
  filter_items(response, [minuteOfDay](const Json& item) {
    if (!item.contains("openHours")) return true;
    for (const auto& interval : item.at("openHours")) {
      if (interval[0].get<int>() <= minuteOfDay && minuteOfDay < interval[1].get<int>()) return true;
    }
    return false;
  });
  return response;
}

Json filter_by_distance(Json response, const BoundArgs& args, const ContextAccessor& context) {
  const double radiusKm = args.number_or("radiusKm", 5.0);
  const GeoValue here = GeoValue::from_value(context.resolve("user.gps"));
  if (!response.contains("items") || !response["items"].is_array()) return response;

  std::vector<std::pair<double, Json>> kept;
  for (auto& item : response["items"]) {
    if (!item.contains("location")) continue;
    const double distance = great_circle_distance_km(here, GeoValue::from_value(item["location"]));
    if (distance > radiusKm) continue;
    item["distanceKm"] = std::round(distance * 100.0) / 100.0;
    kept.emplace_back(distance, std::move(item));
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  Json items = Json::array();
  for (auto& [distance, item] : kept) {
    (void)distance;
    items.push_back(std::move(item));
  }
  response["items"] = std::move(items);
  return response;
}

Json optimize_payload(Json response, const BoundArgs& args, const ContextAccessor& context) {
  (void)context;
  const auto pageSize = static_cast<std::size_t>(args.number_or("pageSize", 5.0));
  if (response.contains("items") && response["items"].is_array()) {
    auto& items = response["items"];
    for (auto& item : items) item.erase("photoRef");
    if (items.size() > pageSize) {
      Json truncated = Json::array();
      for (std::size_t i = 0; i < pageSize; ++i) truncated.push_back(std::move(items[i]));
      items = std::move(truncated);
    }
  }
  response["optimized"] = true;
  return response;
}

Json filter_preferences(Json response, const BoundArgs& args, const ContextAccessor& context) {
  (void)args;
  const Value preferences = context.resolve("user.preferences");
  std::vector<std::string> cuisines;
  if (preferences.contains("cuisines")) {
    for (const auto& cuisine : preferences.at("cuisines")) {
      cuisines.push_back(lower(cuisine.get<std::string>()));
    }
  }
  int maxPriceTier = 4;
  if (preferences.contains("maxPriceTier")) maxPriceTier = preferences.at("maxPriceTier").get<int>();

  filter_items(response, [&](const Json& item) {
    if (!cuisines.empty()) {
      const std::string cuisine = lower(item.value("cuisine", ""));
      if (std::find(cuisines.begin(), cuisines.end(), cuisine) == cuisines.end()) return false;
    }
    return item.value("priceTier", 1) <= maxPriceTier;
  });
  return response;
}

void register_demo_adaptations(AdaptationRegistry& registry) {
  registry.register_adaptation("localize", {.after = localize});
  registry.register_adaptation("filterOpen", {.after = filter_open});
  registry.register_adaptation("filterByDistance", {.after = filter_by_distance});
  registry.register_adaptation("optimizePayload", {.after = optimize_payload});
  registry.register_adaptation("filterPreferences", {.after = filter_preferences});
}

DemoWorld::DemoWorld(const std::string& strategiesXml, const std::string& restaurantsJson,
                     std::function<TimePoint()> clock)
    : providers_(clock), weaver_(services_, adaptations_, derivations_) {
  derivations_ = DerivationRegistry::with_builtins();
  register_demo_adaptations(adaptations_);

  restaurants_ = parse_restaurants(Json::parse(restaurantsJson));
  CoreService core;
  core.serviceId = kServiceId;
  core.operations["search"] = [this](const Json& request) {
    return search_restaurants(restaurants_, request);
  };
  services_.add(std::move(core));

  auto document = load_strategy_document(strategiesXml, adaptations_);
  serviceId_ = document.cas.serviceId;
  weaver_.register_cas(std::move(document));
  document_ = weaver_.cas_for(serviceId_);
  providers_.set_model(&document_->model);

  weatherStub_ = std::make_shared<StubTransport>(clock);
  timeSource_ = std::make_shared<SettableSource>(clock);

  providers_.register_provider(
      {kDeviceProviderId,
       ProviderKind::Entity,
       {"device.hardware.battery.level", "device.connexionMode", "device.hardware.memorySize"},
       {Locality::Local, ProviderMode::Notification},
       {},
       {}});
  providers_.register_provider({kUserProviderId,
                                ProviderKind::Entity,
                                {"user.language", "user.gps", "user.preferences"},
                                {Locality::Local, ProviderMode::Notification},
                                {},
                                {}});
  providers_.register_provider({kTimeProviderId,
                                ProviderKind::Parameter,
                                {"environment.time"},
                                {Locality::Local, ProviderMode::Query},
                                {},
                                {}},
                               timeSource_);
  providers_.register_provider({kWeatherProviderId,
                                ProviderKind::Parameter,
                                {"environment.weather"},
                                {Locality::Remote, ProviderMode::Query},
                                {},
                                {}},
                               std::make_shared<RemoteSource>(weatherStub_, kWeatherProviderId));
  providers_.register_provider(
      {serviceId_,
       ProviderKind::Context,
       {},
       {Locality::Local, ProviderMode::Query},
       {kDeviceProviderId, kUserProviderId, kTimeProviderId, kWeatherProviderId},
       {}});

  // Context changes invalidate the async cache so the next request re-weaves.
  for (const auto* providerId : {kDeviceProviderId, kUserProviderId}) {
    const auto* descriptor = providers_.find(providerId);
    for (const auto& path : descriptor->suppliesPaths) {
      invalidationSubs_.push_back(providers_.subscribe(
          providerId, path,
          [this](const std::string&, const Value&, TimePoint) { weaver_.invalidate(serviceId_); }));
    }
  }
}

void DemoWorld::set_context(const std::string& path, Value value) {
  const auto* provider = providers_.provider_for_path(path);
  if (provider == nullptr) {
    throw AcasError(ErrorCode::UnknownPath, "no provider supplies path: " + path, path);
  }
  if (provider->interface.mode == ProviderMode::Notification) {
    providers_.publish(provider->id, path, std::move(value));
  } else if (provider->interface.locality == Locality::Remote) {
    weatherStub_->set(path, std::move(value));
  } else {
    timeSource_->set(path, std::move(value));
  }
}

void DemoWorld::unset_context(const std::string& path) {
  const auto* provider = providers_.provider_for_path(path);
  if (provider == nullptr) {
    throw AcasError(ErrorCode::UnknownPath, "no provider supplies path: " + path, path);
  }
  if (provider->interface.mode == ProviderMode::Notification) {
    providers_.retract(provider->id, path);
  } else if (provider->interface.locality == Locality::Remote) {
    weatherStub_->unset(path);
  } else {
    timeSource_->unset(path);
  }
}

DemoWorld::CallResult DemoWorld::call(const std::string& serviceId, const std::string& operation,
                                      const Json& request, NotifyMode mode) {
  auto snapshot = providers_.snapshot(serviceId);
  Decision decision = weaver_.notify(serviceId, std::move(snapshot), mode);
  Json response = decision.service->invoke(operation, request);
  return {std::move(response), std::move(decision)};
}

}  // namespace acas::demo
