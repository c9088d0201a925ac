// Acceptance suite: one criterion per entry, one PASS/FAIL line each.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "acas/demo/scenario.hpp"
#include "helpers.hpp"

using namespace acas;
using namespace acas::demo;
using namespace acas::testing;

#ifndef ACAS_DATA_DIR
#define ACAS_DATA_DIR "data"
#endif

namespace {

struct CriterionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw CriterionFailure(message);
}

std::string data_path(const std::string& name) { return std::string(ACAS_DATA_DIR) + "/" + name; }

DemoWorld make_world() {
  return DemoWorld(read_file(data_path("restaurants-cas.xml")),
                   read_file(data_path("restaurants.json")));
}

// ---------------------------------------------------------------------------
// 1. Scenario reproduction: battery 80 -> photos; battery 15 (or 2G) ->
//    optimized, <= 5 items, no photoRef. Under 5 seconds.
void criterion_scenario_reproduction() {
  const auto start = std::chrono::steady_clock::now();
  for (const char* script : {"scenario-optimization.txt", "scenario-connexionmode.txt"}) {
    const auto result = run_scenario_files(data_path("restaurants-cas.xml"), data_path(script),
                                           data_path("restaurants.json"));
    std::string detail;
    for (const auto& failure : result.failures) detail += "\n    " + failure;
    require(result.exitCode == 0, std::string(script) + " exited " +
                                      std::to_string(result.exitCode) + detail);
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  require(elapsed < 5000, "runtime " + std::to_string(elapsed) + " ms >= 5 s");
}

// 2. Simultaneous adaptation: one response localized, open-filtered,
//    distance-sorted, preference-filtered and optimized at once.
void criterion_simultaneous_adaptation() {
  const auto result = run_scenario_files(data_path("restaurants-cas.xml"),
                                         data_path("scenario-full.txt"),
                                         data_path("restaurants.json"));
  std::string detail;
  for (const auto& failure : result.failures) detail += "\n    " + failure;
  require(result.exitCode == 0, "scenario-full.txt exited " + std::to_string(result.exitCode) +
                                    detail);
}

// 3. Identity weaving: empty strategy set, woven output equals core output.
void criterion_identity_weaving() {
  const auto restaurants =
      parse_restaurants(Json::parse(read_file(data_path("restaurants.json"))));

  ServiceRegistry services;
  CoreService core;
  core.serviceId = "RestaurantsSearching";
  core.operations["search"] = [&restaurants](const Json& request) {
    return search_restaurants(restaurants, request);
  };
  services.add(std::move(core));
  AdaptationRegistry adaptations;
  const auto derivations = DerivationRegistry::with_builtins();
  Weaver weaver(services, adaptations, derivations);

  CasDocument empty;
  empty.cas.serviceId = "RestaurantsSearching";
  empty.model = flat_model({simple_param("ctx.unused")});
  weaver.register_cas(empty);

  std::mt19937 rng(20260810);
  const char* keywords[] = {"", "mo", "AN", "ital", "zzz", "sea", "IaN"};
  for (int i = 0; i < 120; ++i) {
    Json request;
    if (rng() % 3 != 0) request["cuisineKeyword"] = keywords[rng() % 7];
    if (rng() % 2 == 0) request["maxPrice"] = static_cast<int>(1 + rng() % 4);
    request["page"] = static_cast<int>(1 + rng() % 4);
    request["pageSize"] = static_cast<int>(1 + rng() % 25);

    const auto snapshot = make_snapshot({}, "RestaurantsSearching");
    const Decision decision = weaver.notify("RestaurantsSearching", snapshot, NotifyMode::Sync);
    const Json woven = decision.service->invoke("search", request);
    const Json direct = search_restaurants(restaurants, request);
    require(woven.dump() == direct.dump(),
            "woven output diverged for request " + request.dump());
  }
}

// 4. Condition evaluator vs brute-force truth table, >= 1000 cases.
void criterion_condition_oracle() {
  std::mt19937 rng(424242);
  ExpressionGen gen(rng, {});
  const std::vector<std::string> paths = {"b.p0", "b.p1", "b.p2"};
  int cases = 0;
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    int budget = 3;
    const ExprPtr expr = gen.boolean_expr(paths, 3, budget);
    for (int bits = 0; bits < 8; ++bits) {
      std::map<std::string, bool> env;
      std::map<std::string, Value> values;
      for (std::size_t p = 0; p < paths.size(); ++p) {
        const bool value = (bits >> p) & 1;
        env[paths[p]] = value;
        values[paths[p]] = value;
      }
      const auto snapshot = make_snapshot(std::move(values));
      const ContextAccessor context(nullptr, *snapshot, nullptr);
      const bool expected = truth_table_eval(*expr, env);
      const bool actual = evaluate_condition({pretty_print(*expr), expr}, context);
      if (expected != actual) ++mismatches;
      ++cases;
    }
  }
  require(cases >= 1000, "only " + std::to_string(cases) + " cases");
  require(mismatches == 0, std::to_string(mismatches) + " mismatches in " +
                               std::to_string(cases) + " cases");
}

// 5. Priority determinism: permuting declaration order of distinct-priority
//    bindings never changes the response.
void criterion_priority_determinism() {
  ServiceRegistry services;
  CoreService core;
  core.serviceId = "Echo";
  core.operations["run"] = [](const Json& request) {
    Json response = request;
    response["tags"].push_back("core");
    return response;
  };
  services.add(std::move(core));
  AdaptationRegistry adaptations;
  for (const std::string tag : {"A", "B", "C", "D", "E"}) {
    adaptations.register_adaptation(
        "tag" + tag, {.after = [tag](Json response, const BoundArgs&, const ContextAccessor&) {
          response["tags"].push_back(tag);
          return response;
        }});
  }
  const auto derivations = DerivationRegistry::with_builtins();
  Weaver weaver(services, adaptations, derivations);

  std::vector<std::pair<std::string, int>> plan = {
      {"tagA", 12}, {"tagB", 3}, {"tagC", 44}, {"tagD", 7}, {"tagE", 29}};
  std::mt19937 rng(777);
  std::string reference;
  for (int round = 0; round < 60; ++round) {
    std::shuffle(plan.begin(), plan.end(), rng);
    CasDocument document;
    document.cas.serviceId = "Echo";
    document.model = flat_model({simple_param("ctx.flag", ValueType::Boolean)});
    document.cas.views.push_back({"Flag", {"ctx.flag"}, {}});
    CVSAdaptationStrategy cvs;
    cvs.viewName = "Flag";
    cvs.strategy.name = "S";
    for (std::size_t i = 0; i < plan.size(); ++i) {
      AdaptationBinding binding;
      binding.condition = parse_condition("ctx.flag == true");
      binding.rule = {"Echo", "*", AdviceKind::After};
      binding.adaptation = {plan[i].first, {}};
      binding.priority = plan[i].second;
      binding.declarationIndex = static_cast<int>(i);
      cvs.strategy.bindings.push_back(std::move(binding));
    }
    document.cas.cvsStrategies.push_back(std::move(cvs));
    weaver.register_cas(document);

    const auto snapshot = make_snapshot({{"ctx.flag", true}}, "Echo");
    const Decision decision = weaver.notify("Echo", snapshot, NotifyMode::Sync);
    const std::string response =
        decision.service->invoke("run", Json{{"tags", Json::array()}}).dump();
    if (round == 0) {
      reference = response;
      require(response.find(R"(["core","B","D","A","E","C"])") != std::string::npos,
              "unexpected priority order: " + response);
    } else {
      require(response == reference, "permutation " + std::to_string(round) + " diverged");
    }
  }
}

// 6. Pertinence monotonicity plus exact-removal on required paths.
void criterion_pertinence_monotonicity() {
  ServiceRegistry services;
  AdaptationRegistry adaptations;
  const auto derivations = DerivationRegistry::with_builtins();
  Weaver weaver(services, adaptations, derivations);

  CasDocument document;
  document.cas.serviceId = "Svc";
  std::vector<std::string> paths;
  std::vector<ParameterDescriptor> params;
  for (int i = 0; i < 8; ++i) {
    paths.push_back("m.p" + std::to_string(i));
    params.push_back(simple_param(paths.back()));
  }
  document.model = flat_model(params);
  for (int v = 0; v < 4; ++v) {
    ContextView view;
    view.name = "V" + std::to_string(v);
    view.paths = {paths[static_cast<std::size_t>(2 * v)],
                  paths[static_cast<std::size_t>(2 * v + 1)]};
    document.cas.views.push_back(view);
    CVSAdaptationStrategy cvs;
    cvs.viewName = view.name;
    cvs.strategy.name = "S" + std::to_string(v);
    AdaptationBinding binding;
    binding.condition = parse_condition("exists(" + paths[0] + ")");
    binding.rule = {"Svc", "*", AdviceKind::After};
    binding.adaptation = {"unused", {}};
    cvs.strategy.bindings.push_back(std::move(binding));
    document.cas.cvsStrategies.push_back(std::move(cvs));
  }

  auto selected_set = [&](const std::map<std::string, Value>& values) {
    std::set<std::string> out;
    const auto snapshot = make_snapshot(values);
    for (const auto* cvs : weaver.select_pertinent(document, *snapshot)) {
      out.insert(cvs->strategy.name);
    }
    return out;
  };

  std::mt19937 rng(1234);
  for (int round = 0; round < 220; ++round) {
    std::map<std::string, Value> small, large;
    for (const auto& path : paths) {
      const int coin = static_cast<int>(rng() % 3);
      if (coin >= 1) large[path] = 1;
      if (coin == 2) small[path] = 1;
    }
    const auto selectedSmall = selected_set(small);
    const auto selectedLarge = selected_set(large);
    require(std::includes(selectedLarge.begin(), selectedLarge.end(), selectedSmall.begin(),
                          selectedSmall.end()),
            "monotonicity violated in round " + std::to_string(round));
  }

  std::map<std::string, Value> full;
  for (const auto& path : paths) full[path] = 1;
  const auto all = selected_set(full);
  require(all.size() == 4, "full snapshot must select all strategies");
  for (int v = 0; v < 4; ++v) {
    for (int slot = 0; slot < 2; ++slot) {
      auto partial = full;
      partial.erase(paths[static_cast<std::size_t>(2 * v + slot)]);
      auto expected = all;
      expected.erase("S" + std::to_string(v));
      require(selected_set(partial) == expected,
              "removing a path of V" + std::to_string(v) + " must remove exactly S" +
                  std::to_string(v));
    }
  }
}

// 7. Geo math: haversine properties, the frozen 111.195 value against an
//    independent route, DMS round-trips under 1e-9.
void criterion_geo_math() {
  const auto oracle = [](const GeoValue& a, const GeoValue& b) {
    const double rad = 3.14159265358979323846 / 180.0;
    const double h = std::sin((b.latitude - a.latitude) * rad / 2) *
                         std::sin((b.latitude - a.latitude) * rad / 2) +
                     std::cos(a.latitude * rad) * std::cos(b.latitude * rad) *
                         std::sin((b.longitude - a.longitude) * rad / 2) *
                         std::sin((b.longitude - a.longitude) * rad / 2);
    return 6371.0 * 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
  };

  const double frozen = great_circle_distance_km({0, 0}, {1, 0});
  require(std::abs(frozen - 111.195) <= 0.01,
          "distance((0,0),(1,0)) = " + std::to_string(frozen));
  require(std::abs(frozen - oracle({0, 0}, {1, 0})) < 1e-9, "routes disagree on the frozen value");

  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> lat(-90, 90), lon(-180, 180);
  for (int i = 0; i < 1200; ++i) {
    const GeoValue a{lat(rng), lon(rng)};
    const GeoValue b{lat(rng), lon(rng)};
    const GeoValue c{lat(rng), lon(rng)};
    require(great_circle_distance_km(a, a) == 0.0, "d(a,a) != 0");
    require(std::abs(great_circle_distance_km(a, b) - great_circle_distance_km(b, a)) < 1e-9,
            "asymmetric distance");
    require(std::abs(great_circle_distance_km(a, b) - oracle(a, b)) < 1e-6,
            "implementation and oracle disagree");
    require(great_circle_distance_km(a, c) <= great_circle_distance_km(a, b) +
                                                  great_circle_distance_km(b, c) + 1e-6,
            "triangle inequality violated");
  }

  std::uniform_int_distribution<long> grid(-90'000'000, 90'000'000);
  for (int i = 0; i < 3000; ++i) {
    const double dd = static_cast<double>(grid(rng)) / 1e6;
    const double back = dms_to_dd(dd_to_dms(dd, GeoAxis::Latitude));
    require(std::abs(back - dd) < 1e-9, "DMS round trip error at " + std::to_string(dd));
  }
}

// 8. Document round-trip: generated models structurally, the shipped
//    document byte-identically.
void criterion_document_round_trip() {
  const auto registry = dummy_registry();
  std::mt19937 rng(987654321);
  CasGen gen(rng);
  for (int i = 0; i < 120; ++i) {
    const CasDocument document = gen.generate();
    const auto reloaded = load_strategy_document(serialize_strategy(document), registry);
    require(structurally_equal(document, reloaded),
            "generated document " + std::to_string(i) + " did not round-trip");
  }

  AdaptationRegistry demoRegistry;
  register_demo_adaptations(demoRegistry);
  const auto bytes = read_file(data_path("restaurants-cas.xml"));
  const auto document = load_strategy_document(bytes, demoRegistry);
  require(serialize_strategy(document) == bytes,
          "shipped document is not in canonical form");
}

// 9. Provider semantics: exactly-once delivery, snapshot isolation,
//    degradation equal to full-minus-failed for every single failure.
void criterion_provider_semantics() {
  auto world = make_world();
  auto& providers = world.providers();

  int delivered = 0;
  auto sub = providers.subscribe(DemoWorld::kDeviceProviderId, "device.hardware.battery.level",
                                 [&](const std::string&, const Value&, TimePoint) { ++delivered; });
  const int publishes = 25;
  for (int i = 0; i < publishes; ++i) {
    providers.publish(DemoWorld::kDeviceProviderId, "device.hardware.battery.level", i);
  }
  require(delivered == publishes, "expected exactly-once delivery, got " +
                                      std::to_string(delivered));
  require(sub.delivered_count() == static_cast<std::uint64_t>(publishes), "counter mismatch");
  providers.unsubscribe(sub);

  // Isolation under interleaved publishes.
  providers.publish(DemoWorld::kDeviceProviderId, "device.hardware.battery.level", 10);
  const auto s1 = providers.snapshot(DemoWorld::kServiceId);
  providers.publish(DemoWorld::kDeviceProviderId, "device.hardware.battery.level", 90);
  const auto s2 = providers.snapshot(DemoWorld::kServiceId);
  require(s1->resolve("device.hardware.battery.level") == Value(10), "s1 lost isolation");
  require(s2->resolve("device.hardware.battery.level") == Value(90), "s2 missed the publish");

  // Degradation: fail each provider in turn.
  world.set_context("user.language", "fr");
  world.set_context("user.gps", GeoValue{31.6, -7.9}.to_value());
  world.set_context("environment.time", 780);
  world.set_context("environment.weather", "sunny");
  // battery.level, user.language, user.gps, environment.time, environment.weather
  const auto full = providers.snapshot(DemoWorld::kServiceId);
  require(full->entries().size() == 5, "expected 5 healthy entries, got " +
                                           std::to_string(full->entries().size()));

  struct Injection {
    std::string provider;
    std::function<void(bool)> toggle;
  };
  auto retractPaths = [&](const std::string& providerId, bool failing) {
    const auto* descriptor = providers.find(providerId);
    for (const auto& path : descriptor->suppliesPaths) {
      if (failing) {
        // A failed notification provider contributes nothing.
        providers.retract(providerId, path);
      }
    }
  };
  std::vector<Injection> injections = {
      {DemoWorld::kTimeProviderId, [&](bool on) { world.time_source().set_failing(on); }},
      {DemoWorld::kWeatherProviderId, [&](bool on) { world.weather_stub().set_down(on); }},
      {DemoWorld::kDeviceProviderId,
       [&](bool on) { retractPaths(DemoWorld::kDeviceProviderId, on); }},
      {DemoWorld::kUserProviderId, [&](bool on) { retractPaths(DemoWorld::kUserProviderId, on); }},
  };
  for (const auto& injection : injections) {
    injection.toggle(true);
    const auto degraded = providers.snapshot(DemoWorld::kServiceId);
    const auto& supplied = providers.find(injection.provider)->suppliesPaths;
    std::set<std::string> expected;
    for (const auto& [path, entry] : full->entries()) {
      (void)entry;
      if (supplied.count(path) == 0) expected.insert(path);
    }
    std::set<std::string> actual;
    for (const auto& [path, entry] : degraded->entries()) {
      (void)entry;
      actual.insert(path);
    }
    require(actual == expected, "degradation mismatch for " + injection.provider);
    injection.toggle(false);
    // Restore the notification caches for the next round.
    world.set_context("device.hardware.battery.level",
                      full->resolve("device.hardware.battery.level"));
    world.set_context("user.language", "fr");
    world.set_context("user.gps", GeoValue{31.6, -7.9}.to_value());
  }
}

// 10. Async cache correctness: hit on identical snapshots, recompute after a
//     publish, sync == async responses.
void criterion_async_cache() {
  auto world = make_world();
  world.set_context("device.hardware.battery.level", 15);
  world.set_context("user.language", "fr");

  const Json request{{"page", 1}};
  auto first = world.call(DemoWorld::kServiceId, "search", request, NotifyMode::Async);
  require(!first.decision.cacheHit, "first notify must miss");
  auto second = world.call(DemoWorld::kServiceId, "search", request, NotifyMode::Async);
  require(second.decision.cacheHit, "identical snapshot must hit");
  require(world.weaver().cache_stats().hits == 1, "hit counter");

  auto inSync = world.call(DemoWorld::kServiceId, "search", request, NotifyMode::Sync);
  require(inSync.response.dump() == second.response.dump(), "sync and async responses differ");

  world.set_context("device.hardware.battery.level", 15);  // publish on a subscribed path
  auto third = world.call(DemoWorld::kServiceId, "search", request, NotifyMode::Async);
  require(!third.decision.cacheHit, "publish must invalidate the cache");
  require(third.response.dump() == second.response.dump(),
          "recomputed response must match for unchanged context");
}

struct Criterion {
  int number;
  std::string name;
  std::function<void()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "scenario-reproduction", criterion_scenario_reproduction},
      {2, "simultaneous-adaptation", criterion_simultaneous_adaptation},
      {3, "identity-weaving", criterion_identity_weaving},
      {4, "condition-evaluator-oracle", criterion_condition_oracle},
      {5, "priority-determinism", criterion_priority_determinism},
      {6, "pertinence-monotonicity", criterion_pertinence_monotonicity},
      {7, "geo-math", criterion_geo_math},
      {8, "document-round-trip", criterion_document_round_trip},
      {9, "provider-semantics", criterion_provider_semantics},
      {10, "async-cache-correctness", criterion_async_cache},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    try {
      criterion.body();
      std::cout << "[PASS] " << criterion.number << ". " << criterion.name << "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "[FAIL] " << criterion.number << ". " << criterion.name << ": " << e.what()
                << "\n";
    }
  }
  if (failures != 0) {
    std::cout << failures << " of " << criteria.size() << " criteria failed\n";
  }
  return failures;
}
