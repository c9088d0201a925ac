#include "acas/weaver.hpp"

#include <algorithm>

namespace acas {

void ServiceRegistry::add(CoreService service) {
  std::unique_lock lock(mutex_);
  services_[service.serviceId] = std::move(service);
}

const CoreService* ServiceRegistry::find(const std::string& serviceId) const {
  std::shared_lock lock(mutex_);
  const auto it = services_.find(serviceId);
  return it == services_.end() ? nullptr : &it->second;
}

std::string WeaveTrace::to_text() const {
  std::string out;
  for (const auto& record : records) {
    out += "strategy=" + record.strategy + " binding=" + std::to_string(record.bindingIndex) +
           " condition=" + record.condition + " applied=" + (record.applied ? "true" : "false") +
           "\n";
  }
  return out;
}

WovenService::WovenService(const CoreService* core, std::vector<ActiveBinding> bindings,
                           std::shared_ptr<const CasDocument> owner, const ContextModel* model,
                           SnapshotPtr snapshot, const DerivationRegistry* derivations)
    : core_(core),
      bindings_(std::move(bindings)),
      owner_(std::move(owner)),
      model_(model),
      snapshot_(std::move(snapshot)),
      derivations_(derivations),
      snapshotDigest_(snapshot_->digest()) {}

namespace {

BoundArgs bind_args(const ActiveBinding& binding, const ContextAccessor& context) {
  std::map<std::string, Value> values;
  for (const auto& [name, arg] : binding.args) {
    if (arg.isPath) {
      try {
        values.emplace(name, context.resolve(arg.path));
      } catch (const AcasError& e) {
        throw AdaptationFailure(binding.adaptationName,
                                std::string("argument '") + name + "': " + e.what());
      }
    } else {
      values.emplace(name, arg.literal);
    }
  }
  return BoundArgs(std::move(values));
}

template <typename Fn>
Json run_behavior(const ActiveBinding& binding, Fn&& fn) {
  try {
    return fn();
  } catch (const AdaptationFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw AdaptationFailure(binding.adaptationName, e.what());
  }
}

}  // namespace

Json WovenService::invoke(const std::string& operation, Json request) const {
  const ContextAccessor context(model_, *snapshot_, derivations_);

  std::vector<const ActiveBinding*> befores;
  std::vector<const ActiveBinding*> arounds;
  std::vector<const ActiveBinding*> afters;
  const ActiveBinding* replace = nullptr;
  for (const auto& binding : bindings_) {
    if (!binding.rule.matches_operation(operation)) continue;
    switch (binding.advice) {
      case AdviceKind::Before: befores.push_back(&binding); break;
      case AdviceKind::Around: arounds.push_back(&binding); break;
      case AdviceKind::After: afters.push_back(&binding); break;
      case AdviceKind::Replace:
        if (replace == nullptr) replace = &binding;
        break;
    }
  }

  const auto coreOp = core_->operations.find(operation);
  if (coreOp == core_->operations.end() && replace == nullptr) {
    throw AcasError(ErrorCode::UnknownOperation,
                    "service " + core_->serviceId + " has no operation '" + operation + "'",
                    operation);
  }

  for (const auto* binding : befores) {
    request = run_behavior(*binding, [&] {
      return binding->behavior->before(std::move(request), bind_args(*binding, context), context);
    });
  }

  // Center of the chain: the replace behavior when one matched, the core
  // handler otherwise.
  ProceedFn chain = [&](Json innerRequest) -> Json {
    if (replace != nullptr) {
      return run_behavior(*replace, [&] {
        return replace->behavior->replace(std::move(innerRequest), bind_args(*replace, context),
                                          context);
      });
    }
    return coreOp->second(innerRequest);
  };
  // Wrap arounds inside-out so the earliest-sorted one ends up outermost.
  for (auto it = arounds.rbegin(); it != arounds.rend(); ++it) {
    const ActiveBinding* binding = *it;
    ProceedFn inner = std::move(chain);
    chain = [binding, inner = std::move(inner), &context](Json innerRequest) -> Json {
      return run_behavior(*binding, [&] {
        return binding->behavior->around(std::move(innerRequest), inner,
                                         bind_args(*binding, context), context);
      });
    };
  }

  Json response = chain(std::move(request));

  for (const auto* binding : afters) {
    response = run_behavior(*binding, [&] {
      return binding->behavior->after(std::move(response), bind_args(*binding, context), context);
    });
  }
  return response;
}

Weaver::Weaver(const ServiceRegistry& services, const AdaptationRegistry& adaptations,
               const DerivationRegistry& derivations)
    : services_(services), adaptations_(adaptations), derivations_(derivations) {}

void Weaver::register_cas(CasDocument document) {
  const std::string serviceId = document.cas.serviceId;
  if (services_.find(serviceId) == nullptr) {
    throw AcasError(ErrorCode::UnknownService, "no core service registered for: " + serviceId,
                    serviceId);
  }
  auto bundle = std::make_shared<const CasDocument>(std::move(document));
  {
    std::unique_lock lock(casMutex_);
    casBundles_[serviceId] = std::move(bundle);
  }
  // A replaced bundle must not serve stale woven services.
  invalidate(serviceId);
}

std::shared_ptr<const CasDocument> Weaver::cas_for(const std::string& serviceId) const {
  std::shared_lock lock(casMutex_);
  const auto it = casBundles_.find(serviceId);
  return it == casBundles_.end() ? nullptr : it->second;
}

std::vector<const CVSAdaptationStrategy*> Weaver::select_pertinent(
    const CasDocument& document, const ContextSnapshot& snapshot) const {
  const ContextAccessor context(&document.model, snapshot, &derivations_);
  std::vector<const CVSAdaptationStrategy*> selected;
  for (const auto& cvs : document.cas.cvsStrategies) {
    const auto* view = document.cas.find_view(cvs.viewName);
    if (view == nullptr) continue;
    const auto paths = required_paths(*view, document.cas);
    const bool available = std::all_of(paths.begin(), paths.end(), [&](const std::string& path) {
      return context.can_resolve(path);
    });
    if (available) selected.push_back(&cvs);
  }
  return selected;
}

Decision Weaver::weave(const CoreService& core, const CasDocument& document,
                       const std::vector<const CVSAdaptationStrategy*>& selected,
                       SnapshotPtr snapshot, std::shared_ptr<const CasDocument> owner) const {
  const ContextAccessor context(&document.model, *snapshot, &derivations_);
  auto trace = std::make_shared<WeaveTrace>();
  std::vector<ActiveBinding> active;

  int strategyOrdinal = 0;
  for (const auto* cvs : selected) {
    for (const auto& binding : cvs->strategy.bindings) {
      TraceRecord record{cvs->strategy.name, binding.declarationIndex, "", false};
      if (!binding.rule.matches_service(core.serviceId)) {
        record.condition = "skipped:service-mismatch";
        trace->records.push_back(std::move(record));
        continue;
      }
      bool holds = false;
      try {
        holds = evaluate_condition(binding.condition, context);
        record.condition = holds ? "true" : "false";
      } catch (const AcasError& e) {
        record.condition = std::string("skipped:") + to_string(e.code()) +
                           (e.subject().empty() ? "" : "(" + e.subject() + ")");
      }
      if (holds) {
        const auto* behavior = adaptations_.find(binding.adaptation.name);
        if (behavior == nullptr || !behavior->supports(binding.rule.advice)) {
          throw AcasError(ErrorCode::UnknownAdaptation,
                          "adaptation not registered or advice unsupported: " +
                              binding.adaptation.name,
                          binding.adaptation.name);
        }
        record.applied = true;
        active.push_back({cvs->strategy.name, binding.adaptation.name, behavior,
                          binding.rule.advice, binding.rule, binding.adaptation.args,
                          binding.priority, binding.declarationIndex, strategyOrdinal});
      }
      trace->records.push_back(std::move(record));
    }
    ++strategyOrdinal;
  }

  std::stable_sort(active.begin(), active.end(), [](const ActiveBinding& a, const ActiveBinding& b) {
    return std::tie(a.priority, a.declarationIndex, a.strategyOrdinal) <
           std::tie(b.priority, b.declarationIndex, b.strategyOrdinal);
  });

  // At most one replace binding survives; the rest are trace-dropped.
  bool haveReplace = false;
  std::vector<ActiveBinding> chain;
  for (auto& binding : active) {
    if (binding.advice == AdviceKind::Replace) {
      if (haveReplace) {
        for (auto& record : trace->records) {
          if (record.strategy == binding.strategyName &&
              record.bindingIndex == binding.declarationIndex && record.applied) {
            record.applied = false;
            break;
          }
        }
        continue;
      }
      haveReplace = true;
    }
    chain.push_back(std::move(binding));
  }

  Decision decision;
  decision.service = std::make_shared<const WovenService>(
      &core, std::move(chain), std::move(owner), &document.model, std::move(snapshot),
      &derivations_);
  decision.trace = std::move(trace);
  return decision;
}

Decision Weaver::notify(const std::string& serviceId, SnapshotPtr snapshot, NotifyMode mode) {
  if (snapshot->service_id() != serviceId) {
    throw AcasError(ErrorCode::UnknownService,
                    "snapshot captured for '" + snapshot->service_id() +
                        "' does not match service '" + serviceId + "'",
                    serviceId);
  }
  const auto document = cas_for(serviceId);
  if (document == nullptr) {
    throw AcasError(ErrorCode::UnknownService, "no CAS registered for service: " + serviceId,
                    serviceId);
  }
  const auto* core = services_.find(serviceId);
  if (core == nullptr) {
    throw AcasError(ErrorCode::UnknownService, "no core service registered for: " + serviceId,
                    serviceId);
  }

  if (mode == NotifyMode::Async) {
    const std::string digest = snapshot->digest();
    {
      std::lock_guard lock(cacheMutex_);
      const auto serviceCache = cache_.find(serviceId);
      if (serviceCache != cache_.end()) {
        const auto hit = serviceCache->second.find(digest);
        if (hit != serviceCache->second.end()) {
          ++stats_.hits;
          Decision decision = hit->second;
          decision.cacheHit = true;
          return decision;
        }
      }
      ++stats_.misses;
    }
    const auto selected = select_pertinent(*document, *snapshot);
    Decision decision = weave(*core, *document, selected, snapshot, document);
    std::lock_guard lock(cacheMutex_);
    cache_[serviceId].emplace(digest, decision);
    return decision;
  }

  const auto selected = select_pertinent(*document, *snapshot);
  return weave(*core, *document, selected, std::move(snapshot), document);
}

void Weaver::invalidate(const std::string& serviceId) {
  std::lock_guard lock(cacheMutex_);
  const auto it = cache_.find(serviceId);
  if (it != cache_.end() && !it->second.empty()) {
    ++stats_.invalidations;
    cache_.erase(it);
  }
}

Weaver::CacheStats Weaver::cache_stats() const {
  std::lock_guard lock(cacheMutex_);
  return stats_;
}

}  // namespace acas
