#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "acas/demo/scenario.hpp"

namespace py = pybind11;
using namespace acas;

namespace {

Json py_to_json(const py::handle& obj) {
  if (obj.is_none()) return Json(nullptr);
  if (py::isinstance<py::bool_>(obj)) return Json(obj.cast<bool>());
  if (py::isinstance<py::int_>(obj)) return Json(obj.cast<long long>());
  if (py::isinstance<py::float_>(obj)) return Json(obj.cast<double>());
  if (py::isinstance<py::str>(obj)) return Json(obj.cast<std::string>());
  if (py::isinstance<py::dict>(obj)) {
    Json out = Json::object();
    for (const auto& item : obj.cast<py::dict>()) {
      out[item.first.cast<std::string>()] = py_to_json(item.second);
    }
    return out;
  }
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    Json out = Json::array();
    for (const auto& item : obj.cast<py::sequence>()) out.push_back(py_to_json(item));
    return out;
  }
  throw py::type_error("unsupported value type for a context/document value");
}

py::object json_to_py(const Json& value) {
  switch (value.type()) {
    case Json::value_t::null: return py::none();
    case Json::value_t::boolean: return py::bool_(value.get<bool>());
    case Json::value_t::number_integer: return py::int_(value.get<long long>());
    case Json::value_t::number_unsigned: return py::int_(value.get<unsigned long long>());
    case Json::value_t::number_float: return py::float_(value.get<double>());
    case Json::value_t::string: return py::str(value.get<std::string>());
    case Json::value_t::array: {
      py::list out;
      for (const auto& item : value) out.append(json_to_py(item));
      return out;
    }
    case Json::value_t::object: {
      py::dict out;
      for (const auto& [key, item] : value.items()) out[py::str(key)] = json_to_py(item);
      return out;
    }
    default: return py::none();
  }
}

SnapshotPtr snapshot_from_dict(const py::dict& entries) {
  std::map<std::string, SnapshotEntry> map;
  const auto now = Clock::now();
  for (const auto& item : entries) {
    map[item.first.cast<std::string>()] = {py_to_json(item.second), "python", now};
  }
  return std::make_shared<ContextSnapshot>("python", now, std::move(map));
}

/// Parsed condition handle for the Python surface.
class PyCondition {
 public:
  explicit PyCondition(const std::string& text) : condition_(parse_condition(text)) {}

  std::string pretty() const { return pretty_print(*condition_.ast); }
  std::string source() const { return condition_.sourceText; }

  bool evaluate(const py::dict& entries) const {
    const auto snapshot = snapshot_from_dict(entries);
    const ContextAccessor context(nullptr, *snapshot, nullptr);
    return evaluate_condition(condition_, context);
  }

  std::vector<std::string> paths() const {
    const auto all = all_paths(*condition_.ast);
    return {all.begin(), all.end()};
  }

 private:
  AdaptationCondition condition_;
};

class PyDemoWorld {
 public:
  PyDemoWorld(const std::string& strategiesPath, const std::string& dataPath)
      : world_(demo::read_file(strategiesPath), demo::read_file(dataPath)) {}

  void set(const std::string& path, const py::handle& value) {
    world_.set_context(path, py_to_json(value));
  }

  void unset(const std::string& path) { world_.unset_context(path); }

  py::dict call(const std::string& operation, const py::handle& request, const std::string& mode) {
    const Json requestDoc = request.is_none() ? Json::object() : py_to_json(request);
    auto outcome = world_.call(world_.service_id(), operation, requestDoc, parse_mode(mode));
    lastTrace_ = outcome.decision.trace->to_text();
    lastCacheHit_ = outcome.decision.cacheHit;
    return json_to_py(outcome.response).cast<py::dict>();
  }

  std::vector<std::string> last_trace() const {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < lastTrace_.size()) {
      const auto end = lastTrace_.find('\n', start);
      lines.push_back(lastTrace_.substr(start, end - start));
      if (end == std::string::npos) break;
      start = end + 1;
    }
    return lines;
  }

  bool last_cache_hit() const { return lastCacheHit_; }

  py::dict cache_stats() const {
    const auto stats = const_cast<PyDemoWorld*>(this)->world_.weaver().cache_stats();
    py::dict out;
    out["hits"] = stats.hits;
    out["misses"] = stats.misses;
    out["invalidations"] = stats.invalidations;
    return out;
  }

  py::dict run_script(const std::string& scriptText, bool trace, const std::string& mode) {
    demo::ScenarioOptions options{trace, parse_mode(mode)};
    const auto result = demo::run_scenario(world_, demo::parse_scenario(scriptText), options);
    return result_to_py(result);
  }

  static py::dict result_to_py(const demo::ScenarioResult& result) {
    py::dict out;
    out["exit_code"] = result.exitCode;
    out["transcript"] = result.transcript;
    py::list failures;
    for (const auto& failure : result.failures) failures.append(py::str(failure));
    out["failures"] = failures;
    return out;
  }

 private:
  static NotifyMode parse_mode(const std::string& mode) {
    if (mode == "sync") return NotifyMode::Sync;
    if (mode == "async") return NotifyMode::Async;
    throw py::value_error("mode must be 'sync' or 'async'");
  }

  demo::DemoWorld world_;
  std::string lastTrace_;
  bool lastCacheHit_ = false;
};

}  // namespace

PYBIND11_MODULE(_acas, m) {
  m.doc() = "Context-aware service adaptation runtime";

  static py::exception<AcasError> acasError(m, "AcasError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const AcasError& e) {
      const std::string message = std::string(to_string(e.code())) + ": " + e.what();
      PyErr_SetString(acasError.ptr(), message.c_str());
    }
  });

  m.def(
      "dms_to_dd",
      [](int degrees, int minutes, double seconds, const std::string& hemisphere) {
        if (hemisphere.size() != 1) throw py::value_error("hemisphere must be one of N S E W");
        return dms_to_dd({degrees, minutes, seconds, hemisphere[0]});
      },
      py::arg("degrees"), py::arg("minutes"), py::arg("seconds"), py::arg("hemisphere"),
      "Convert a Degrees/Minutes/Seconds coordinate to decimal degrees.");

  m.def(
      "dd_to_dms",
      [](double dd, const std::string& axis) {
        const auto value =
            dd_to_dms(dd, axis == "lon" ? GeoAxis::Longitude : GeoAxis::Latitude).to_value();
        return json_to_py(value);
      },
      py::arg("dd"), py::arg("axis") = "lat",
      "Convert decimal degrees to DMS; axis is 'lat' or 'lon'.");

  m.def(
      "great_circle_distance_km",
      [](double lat1, double lon1, double lat2, double lon2) {
        return great_circle_distance_km({lat1, lon1}, {lat2, lon2});
      },
      py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"),
      "Haversine distance on the 6371 km sphere.");

  py::class_<PyCondition>(m, "Condition")
      .def(py::init<const std::string&>(), py::arg("text"))
      .def("pretty", &PyCondition::pretty)
      .def("evaluate", &PyCondition::evaluate, py::arg("context"))
      .def("paths", &PyCondition::paths)
      .def_property_readonly("source", &PyCondition::source);

  m.def(
      "canonicalize_document",
      [](const std::string& xmlText) {
        AdaptationRegistry registry;
        demo::register_demo_adaptations(registry);
        return serialize_strategy(load_strategy_document(xmlText, registry));
      },
      py::arg("xml"),
      "Load a strategy document (validated against the demo adaptations) and "
      "return its canonical serialization.");

  m.def(
      "run_scenario_files",
      [](const std::string& strategies, const std::string& scenario, const std::string& data,
         bool trace, const std::string& mode) {
        demo::ScenarioOptions options{trace,
                                      mode == "async" ? NotifyMode::Async : NotifyMode::Sync};
        return PyDemoWorld::result_to_py(
            demo::run_scenario_files(strategies, scenario, data, options));
      },
      py::arg("strategies"), py::arg("scenario"), py::arg("data"), py::arg("trace") = false,
      py::arg("mode") = "sync");

  py::class_<PyDemoWorld>(m, "DemoWorld")
      .def(py::init<const std::string&, const std::string&>(), py::arg("strategies_path"),
           py::arg("data_path"))
      .def("set", &PyDemoWorld::set, py::arg("path"), py::arg("value"))
      .def("unset", &PyDemoWorld::unset, py::arg("path"))
      .def("call", &PyDemoWorld::call, py::arg("operation"), py::arg("request") = py::none(),
           py::arg("mode") = "sync")
      .def("run_script", &PyDemoWorld::run_script, py::arg("script"), py::arg("trace") = false,
           py::arg("mode") = "sync")
      .def("last_trace", &PyDemoWorld::last_trace)
      .def("last_cache_hit", &PyDemoWorld::last_cache_hit)
      .def("cache_stats", &PyDemoWorld::cache_stats);

#ifdef ACAS_VERSION
  m.attr("__version__") = ACAS_VERSION;
#else
  m.attr("__version__") = "0.1.0";
#endif
}
