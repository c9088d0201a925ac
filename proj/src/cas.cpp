#include "acas/cas.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace acas {

namespace {

[[noreturn]] void parse_fail(const std::string& message) {
  throw AcasError(ErrorCode::ParseError, message);
}

void check_attributes(const xml::Node& node, const std::vector<std::string>& allowed,
                      const std::vector<std::string>& required) {
  for (const auto& [key, value] : node.attributes) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      parse_fail("unknown attribute '" + key + "' on <" + node.name + ">");
    }
  }
  for (const auto& key : required) {
    if (node.attr(key) == nullptr) {
      parse_fail("<" + node.name + "> requires attribute '" + key + "'");
    }
  }
}

[[noreturn]] void unknown_element(const xml::Node& parent, const xml::Node& child) {
  parse_fail("unknown element <" + child.name + "> inside <" + parent.name + ">");
}

// Attribute literals: anything that parses as JSON is that value, everything
// else is a plain string. Strings that would re-parse as JSON are serialized
// in their quoted JSON form to keep the round trip exact.
Value parse_attr_literal(const std::string& raw) {
  if (Json::accept(raw)) return Json::parse(raw);
  return Value(raw);
}

std::string serialize_attr_literal(const Value& value) {
  if (value.is_string()) {
    const auto& raw = value.get<std::string>();
    if (!Json::accept(raw)) return raw;
  }
  return value.dump();
}

ParameterDescriptor parse_param(const xml::Node& node) {
  check_attributes(node, {"kind", "path", "type", "unit"}, {"kind", "path", "type"});
  ParameterDescriptor param;
  param.path = *node.attr("path");
  param.kind = param_kind_from_string(*node.attr("kind"));
  param.valueType = value_type_from_string(*node.attr("type"));
  if (const auto* unit = node.attr("unit")) param.unit = *unit;
  for (const auto& child : node.children) {
    if (child.name == "representation") {
      check_attributes(child, {"id"}, {"id"});
      if (!child.children.empty()) parse_fail("<representation> allows no children");
      param.representations.push_back(*child.attr("id"));
    } else if (child.name == "derivation") {
      check_attributes(child, {"function"}, {"function"});
      if (param.derivation) parse_fail("<param> allows a single <derivation>");
      DerivationSpec spec;
      spec.function = *child.attr("function");
      for (const auto& input : child.children) {
        if (input.name != "input") unknown_element(child, input);
        check_attributes(input, {"path"}, {"path"});
        spec.inputs.push_back(*input.attr("path"));
      }
      param.derivation = std::move(spec);
    } else {
      unknown_element(node, child);
    }
  }
  return param;
}

SubContext parse_sub_context(const xml::Node& node) {
  check_attributes(node, {"name"}, {"name"});
  SubContext sc;
  sc.name = *node.attr("name");
  for (const auto& child : node.children) {
    if (child.name == "category") {
      check_attributes(child, {"name"}, {"name"});
      Category category;
      category.name = *child.attr("name");
      for (const auto& param : child.children) {
        if (param.name != "param") unknown_element(child, param);
        category.parameters.push_back(parse_param(param));
      }
      sc.categories.push_back(std::move(category));
    } else if (child.name == "param") {
      sc.parameters.push_back(parse_param(child));
    } else if (child.name == "subContext") {
      sc.children.push_back(parse_sub_context(child));
    } else {
      unknown_element(node, child);
    }
  }
  return sc;
}

ContextModel parse_model(const xml::Node& node) {
  check_attributes(node, {"name"}, {"name"});
  ContextModel model;
  model.name = *node.attr("name");
  for (const auto& child : node.children) {
    if (child.name == "subContext") {
      model.subContexts.push_back(parse_sub_context(child));
    } else if (child.name == "entity") {
      check_attributes(child, {"name"}, {"name"});
      Entity entity;
      entity.name = *child.attr("name");
      for (const auto& param : child.children) {
        if (param.name != "param") unknown_element(child, param);
        entity.parameters.push_back(parse_param(param));
      }
      model.entities.push_back(std::move(entity));
    } else {
      unknown_element(node, child);
    }
  }
  return model;
}

ContextView parse_view(const xml::Node& node) {
  check_attributes(node, {"name"}, {"name"});
  ContextView view;
  view.name = *node.attr("name");
  for (const auto& child : node.children) {
    if (child.name == "param") {
      check_attributes(child, {"path"}, {"path"});
      if (!child.children.empty()) parse_fail("view <param> allows no children");
      view.paths.push_back(*child.attr("path"));
    } else if (child.name == "view") {
      check_attributes(child, {"ref"}, {"ref"});
      view.subViewRefs.push_back(*child.attr("ref"));
    } else {
      unknown_element(node, child);
    }
  }
  return view;
}

AdaptationBinding parse_binding(const xml::Node& node, int declarationIndex) {
  check_attributes(node, {"priority"}, {"priority"});
  AdaptationBinding binding;
  binding.declarationIndex = declarationIndex;
  try {
    binding.priority = std::stoi(*node.attr("priority"));
  } catch (const std::exception&) {
    parse_fail("<binding> priority must be an integer, got '" + *node.attr("priority") + "'");
  }

  bool haveCondition = false, haveRule = false, haveAdaptation = false;
  for (const auto& child : node.children) {
    if (child.name == "condition") {
      check_attributes(child, {}, {});
      if (haveCondition) parse_fail("<binding> allows a single <condition>");
      haveCondition = true;
      try {
        binding.condition = parse_condition(child.text);
      } catch (const SyntaxError& e) {
        parse_fail(std::string("bad condition '") + child.text + "': " + e.what());
      }
    } else if (child.name == "rule") {
      check_attributes(child, {"advice", "operation", "service"},
                       {"advice", "operation", "service"});
      if (haveRule) parse_fail("<binding> allows a single <rule>");
      haveRule = true;
      binding.rule.targetService = *child.attr("service");
      binding.rule.targetOperation = *child.attr("operation");
      binding.rule.advice = advice_kind_from_string(*child.attr("advice"));
    } else if (child.name == "adaptation") {
      check_attributes(child, {"ref"}, {"ref"});
      if (haveAdaptation) parse_fail("<binding> allows a single <adaptation>");
      haveAdaptation = true;
      binding.adaptation.name = *child.attr("ref");
      for (const auto& arg : child.children) {
        if (arg.name != "arg") unknown_element(child, arg);
        check_attributes(arg, {"name", "value", "path"}, {"name"});
        const auto* value = arg.attr("value");
        const auto* path = arg.attr("path");
        if ((value == nullptr) == (path == nullptr)) {
          parse_fail("<arg> requires exactly one of value= or path=");
        }
        const std::string argName = *arg.attr("name");
        if (binding.adaptation.args.count(argName) != 0) {
          parse_fail("duplicate <arg> name '" + argName + "'");
        }
        binding.adaptation.args.emplace(
            argName, value ? ArgValue::of(parse_attr_literal(*value)) : ArgValue::context_path(*path));
      }
    } else {
      unknown_element(node, child);
    }
  }
  if (!haveCondition) parse_fail("<binding> is missing its <condition> element");
  if (!haveRule) parse_fail("<binding> is missing its <rule> element");
  if (!haveAdaptation) parse_fail("<binding> is missing its <adaptation> element");
  return binding;
}

CVSAdaptationStrategy parse_strategy(const xml::Node& node) {
  check_attributes(node, {"name", "view"}, {"name", "view"});
  CVSAdaptationStrategy cvs;
  cvs.viewName = *node.attr("view");
  cvs.strategy.name = *node.attr("name");
  int index = 0;
  for (const auto& child : node.children) {
    if (child.name != "binding") unknown_element(node, child);
    cvs.strategy.bindings.push_back(parse_binding(child, index++));
  }
  return cvs;
}

xml::Node serialize_param(const ParameterDescriptor& param) {
  xml::Node node;
  node.name = "param";
  node.attributes = {{"kind", to_string(param.kind)},
                     {"path", param.path},
                     {"type", to_string(param.valueType)}};
  if (!param.unit.empty()) node.attributes.emplace_back("unit", param.unit);
  for (const auto& rep : param.representations) {
    xml::Node repNode;
    repNode.name = "representation";
    repNode.attributes = {{"id", rep}};
    node.children.push_back(std::move(repNode));
  }
  if (param.derivation) {
    xml::Node derivation;
    derivation.name = "derivation";
    derivation.attributes = {{"function", param.derivation->function}};
    for (const auto& input : param.derivation->inputs) {
      xml::Node inputNode;
      inputNode.name = "input";
      inputNode.attributes = {{"path", input}};
      derivation.children.push_back(std::move(inputNode));
    }
    node.children.push_back(std::move(derivation));
  }
  return node;
}

xml::Node serialize_sub_context(const SubContext& sc) {
  xml::Node node;
  node.name = "subContext";
  node.attributes = {{"name", sc.name}};
  for (const auto& category : sc.categories) {
    xml::Node categoryNode;
    categoryNode.name = "category";
    categoryNode.attributes = {{"name", category.name}};
    for (const auto& param : category.parameters) {
      categoryNode.children.push_back(serialize_param(param));
    }
    node.children.push_back(std::move(categoryNode));
  }
  for (const auto& param : sc.parameters) node.children.push_back(serialize_param(param));
  for (const auto& child : sc.children) node.children.push_back(serialize_sub_context(child));
  return node;
}

}  // namespace

const ContextView* CASAdaptationStrategy::find_view(const std::string& name) const {
  for (const auto& view : views) {
    if (view.name == name) return &view;
  }
  return nullptr;
}

std::set<std::string> required_paths(const ContextView& view, const CASAdaptationStrategy& cas) {
  std::set<std::string> out;
  std::vector<std::string> inProgress;
  std::function<void(const ContextView&)> visit = [&](const ContextView& current) {
    if (std::find(inProgress.begin(), inProgress.end(), current.name) != inProgress.end()) {
      throw AcasError(ErrorCode::CycleDetected,
                      "context view aggregation cycle through '" + current.name + "'",
                      current.name);
    }
    inProgress.push_back(current.name);
    out.insert(current.paths.begin(), current.paths.end());
    for (const auto& ref : current.subViewRefs) {
      if (const auto* sub = cas.find_view(ref)) visit(*sub);
    }
    inProgress.pop_back();
  };
  visit(view);
  return out;
}

CasDocument load_strategy_document(const std::string& bytes, const AdaptationRegistry& registry) {
  return load_strategy_document(bytes, registry, DerivationRegistry::with_builtins());
}

CasDocument load_strategy_document(const std::string& bytes, const AdaptationRegistry& registry,
                                   const DerivationRegistry& derivations) {
  const xml::Node root = xml::parse(bytes);
  if (root.name != "cas") parse_fail("root element must be <cas>, got <" + root.name + ">");
  check_attributes(root, {"service"}, {"service"});

  CasDocument document;
  document.cas.serviceId = *root.attr("service");
  bool haveModel = false;
  for (const auto& child : root.children) {
    if (child.name == "contextModel") {
      if (haveModel) parse_fail("<cas> allows a single <contextModel>");
      haveModel = true;
      document.model = parse_model(child);
    } else if (child.name == "contextView") {
      document.cas.views.push_back(parse_view(child));
    } else if (child.name == "strategy") {
      document.cas.cvsStrategies.push_back(parse_strategy(child));
    } else {
      unknown_element(root, child);
    }
  }

  auto diagnostics = validate_document(document, registry, derivations);
  if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));
  return document;
}

std::vector<Diagnostic> validate_document(const CasDocument& document,
                                          const AdaptationRegistry& registry,
                                          const DerivationRegistry& derivations) {
  std::vector<Diagnostic> out = validate_model(document.model, derivations);
  const auto& cas = document.cas;

  std::set<std::string> viewNames;
  for (const auto& view : cas.views) {
    if (!viewNames.insert(view.name).second) {
      out.push_back({view.name, "duplicate view", "view names must be unique within one CAS"});
    }
    for (const auto& path : view.paths) {
      if (document.model.find(path) == nullptr) {
        out.push_back({view.name, "unknown view path",
                       "path '" + path + "' is not declared in the context model"});
      }
    }
    for (const auto& ref : view.subViewRefs) {
      if (cas.find_view(ref) == nullptr) {
        out.push_back({view.name, "unknown sub-view", "view '" + ref + "' is not declared"});
      }
    }
  }

  for (const auto& view : cas.views) {
    try {
      if (required_paths(view, cas).empty()) {
        out.push_back({view.name, "empty view", "a view's effective path set must be non-empty"});
      }
    } catch (const AcasError& e) {
      out.push_back({view.name, "view cycle", e.what()});
    }
  }

  for (const auto& cvs : cas.cvsStrategies) {
    const auto* view = cas.find_view(cvs.viewName);
    if (view == nullptr) {
      out.push_back({cvs.strategy.name, "unknown view",
                     "strategy references undeclared view '" + cvs.viewName + "'"});
    }
    const auto strategyDiagnostics = validate_strategy(cvs.strategy, document.model, registry);
    out.insert(out.end(), strategyDiagnostics.begin(), strategyDiagnostics.end());

    // Unguarded condition paths must stay within the view's effective set;
    // exists() guards exempt a path from the requirement.
    if (view != nullptr) {
      std::set<std::string> effective;
      try {
        effective = required_paths(*view, cas);
      } catch (const AcasError&) {
        continue;  // already reported as a view cycle
      }
      for (std::size_t i = 0; i < cvs.strategy.bindings.size(); ++i) {
        const auto& binding = cvs.strategy.bindings[i];
        if (!binding.condition.ast) continue;
        for (const auto& path : compared_paths(*binding.condition.ast)) {
          if (effective.count(path) == 0) {
            out.push_back({cvs.strategy.name + "/binding[" + std::to_string(i) + "]",
                           "path outside view",
                           "condition path '" + path + "' escapes view '" + cvs.viewName + "'"});
          }
        }
      }
    }
  }
  return out;
}

std::string serialize_strategy(const CasDocument& document) {
  xml::Node root;
  root.name = "cas";
  root.attributes = {{"service", document.cas.serviceId}};

  xml::Node modelNode;
  modelNode.name = "contextModel";
  modelNode.attributes = {{"name", document.model.name}};
  for (const auto& sc : document.model.subContexts) {
    modelNode.children.push_back(serialize_sub_context(sc));
  }
  for (const auto& entity : document.model.entities) {
    xml::Node entityNode;
    entityNode.name = "entity";
    entityNode.attributes = {{"name", entity.name}};
    for (const auto& param : entity.parameters) {
      entityNode.children.push_back(serialize_param(param));
    }
    modelNode.children.push_back(std::move(entityNode));
  }
  root.children.push_back(std::move(modelNode));

  for (const auto& view : document.cas.views) {
    xml::Node viewNode;
    viewNode.name = "contextView";
    viewNode.attributes = {{"name", view.name}};
    for (const auto& path : view.paths) {
      xml::Node paramNode;
      paramNode.name = "param";
      paramNode.attributes = {{"path", path}};
      viewNode.children.push_back(std::move(paramNode));
    }
    for (const auto& ref : view.subViewRefs) {
      xml::Node refNode;
      refNode.name = "view";
      refNode.attributes = {{"ref", ref}};
      viewNode.children.push_back(std::move(refNode));
    }
    root.children.push_back(std::move(viewNode));
  }

  for (const auto& cvs : document.cas.cvsStrategies) {
    xml::Node strategyNode;
    strategyNode.name = "strategy";
    strategyNode.attributes = {{"name", cvs.strategy.name}, {"view", cvs.viewName}};
    for (const auto& binding : cvs.strategy.bindings) {
      xml::Node bindingNode;
      bindingNode.name = "binding";
      bindingNode.attributes = {{"priority", std::to_string(binding.priority)}};

      xml::Node conditionNode;
      conditionNode.name = "condition";
      conditionNode.text = binding.condition.ast ? pretty_print(*binding.condition.ast)
                                                 : binding.condition.sourceText;
      bindingNode.children.push_back(std::move(conditionNode));

      xml::Node ruleNode;
      ruleNode.name = "rule";
      ruleNode.attributes = {{"advice", to_string(binding.rule.advice)},
                             {"operation", binding.rule.targetOperation},
                             {"service", binding.rule.targetService}};
      bindingNode.children.push_back(std::move(ruleNode));

      xml::Node adaptationNode;
      adaptationNode.name = "adaptation";
      adaptationNode.attributes = {{"ref", binding.adaptation.name}};
      for (const auto& [argName, arg] : binding.adaptation.args) {
        xml::Node argNode;
        argNode.name = "arg";
        argNode.attributes = {{"name", argName}};
        if (arg.isPath) {
          argNode.attributes.emplace_back("path", arg.path);
        } else {
          argNode.attributes.emplace_back("value", serialize_attr_literal(arg.literal));
        }
        adaptationNode.children.push_back(std::move(argNode));
      }
      bindingNode.children.push_back(std::move(adaptationNode));
      strategyNode.children.push_back(std::move(bindingNode));
    }
    root.children.push_back(std::move(strategyNode));
  }
  return xml::serialize(root);
}

bool structurally_equal(const CasDocument& a, const CasDocument& b) {
  if (a.model != b.model) return false;
  const auto& ca = a.cas;
  const auto& cb = b.cas;
  if (ca.serviceId != cb.serviceId || ca.views.size() != cb.views.size() ||
      ca.cvsStrategies.size() != cb.cvsStrategies.size()) {
    return false;
  }
  for (std::size_t i = 0; i < ca.views.size(); ++i) {
    const auto& va = ca.views[i];
    const auto& vb = cb.views[i];
    if (va.name != vb.name || va.paths != vb.paths || va.subViewRefs != vb.subViewRefs) return false;
  }
  for (std::size_t i = 0; i < ca.cvsStrategies.size(); ++i) {
    const auto& sa = ca.cvsStrategies[i];
    const auto& sb = cb.cvsStrategies[i];
    if (sa.viewName != sb.viewName || sa.strategy.name != sb.strategy.name ||
        sa.strategy.bindings.size() != sb.strategy.bindings.size()) {
      return false;
    }
    for (std::size_t j = 0; j < sa.strategy.bindings.size(); ++j) {
      const auto& ba = sa.strategy.bindings[j];
      const auto& bb = sb.strategy.bindings[j];
      if (ba.priority != bb.priority || ba.declarationIndex != bb.declarationIndex ||
          ba.rule != bb.rule || ba.adaptation != bb.adaptation) {
        return false;
      }
      if (static_cast<bool>(ba.condition.ast) != static_cast<bool>(bb.condition.ast)) return false;
      if (ba.condition.ast && !structurally_equal(*ba.condition.ast, *bb.condition.ast)) return false;
    }
  }
  return true;
}

}  // namespace acas
