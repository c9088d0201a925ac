#pragma once

#include <set>
#include <string>
#include <vector>

#include "acas/strategy.hpp"
#include "acas/xml.hpp"

namespace acas {

/// A named subset of context parameters relevant to one adaptation concern.
/// Sub-views are referenced by name and resolved against the owning CAS.
struct ContextView {
  std::string name;
  std::vector<std::string> paths;        // declaration order
  std::vector<std::string> subViewRefs;  // names of aggregated views
};

/// One view paired with the strategy adapting the service to it.
struct CVSAdaptationStrategy {
  std::string viewName;
  SimpleAdaptationStrategy strategy;
};

/// Per-service bundle: every ContextView of the service and the ordered list
/// of view strategies. List order is declaration order, used for
/// tie-breaking.
struct CASAdaptationStrategy {
  std::string serviceId;
  std::vector<ContextView> views;
  std::vector<CVSAdaptationStrategy> cvsStrategies;

  const ContextView* find_view(const std::string& name) const;
};

/// A parsed strategy document: the governing context model plus the CAS.
struct CasDocument {
  ContextModel model;
  CASAdaptationStrategy cas;
};

/// Transitive closure of a view's parameter paths over its sub-views.
/// Throws AcasError(CycleDetected) on self-referential aggregation.
std::set<std::string> required_paths(const ContextView& view, const CASAdaptationStrategy& cas);

/// Parses the XML strategy document (strict mode: unknown elements or
/// attributes are a ParseError), then validates the embedded model, every
/// strategy against it and the registry, and the view/condition coherence
/// rules. Aggregated findings raise ValidationError. The two-argument form
/// validates derivations against the builtin function table; pass the
/// runtime registry when the document uses custom derivation functions.
CasDocument load_strategy_document(const std::string& bytes, const AdaptationRegistry& registry);
CasDocument load_strategy_document(const std::string& bytes, const AdaptationRegistry& registry,
                                   const DerivationRegistry& derivations);

/// Canonical serialization; load(serialize(x)) is structurally equal to x.
std::string serialize_strategy(const CasDocument& document);

/// The validation pass load_strategy_document runs, exposed for reuse.
std::vector<Diagnostic> validate_document(const CasDocument& document,
                                          const AdaptationRegistry& registry,
                                          const DerivationRegistry& derivations);

bool structurally_equal(const CasDocument& a, const CasDocument& b);

}  // namespace acas
