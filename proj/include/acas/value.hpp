#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "acas/errors.hpp"

namespace acas {

/// Context values and request/response documents are JSON trees.
using Json = nlohmann::json;
using Value = Json;

enum class ValueType { Number, String, Boolean, Geo, Record };

const char* to_string(ValueType type);
ValueType value_type_from_string(const std::string& name);

/// Classifies a value into the context value domain. Objects carrying exactly
/// numeric `latitude`/`longitude` members classify as geo; any other object
/// or array classifies as record.
ValueType value_type(const Value& value);

struct GeoValue {
  double latitude = 0.0;
  double longitude = 0.0;

  /// Throws MalformedRepresentation when fields are missing or out of range.
  static GeoValue from_value(const Value& value);
  Value to_value() const;
};

bool is_geo(const Value& value);

enum class GeoAxis { Latitude, Longitude };

/// One coordinate in Degrees/Minutes/Seconds form.
struct DmsValue {
  int degrees = 0;
  int minutes = 0;
  double seconds = 0.0;
  char hemisphere = 'N';  // one of N S E W

  static DmsValue from_value(const Value& value);
  Value to_value() const;
};

/// DD = degrees + minutes/60 + seconds/3600, negated for S/W.
/// Throws MalformedRepresentation for minutes or seconds outside [0, 60).
double dms_to_dd(const DmsValue& dms);

/// Inverse of dms_to_dd with seconds rounded to 1e-6.
DmsValue dd_to_dms(double dd, GeoAxis axis);

/// Generic representation conversion between "DD" and "DMS" for one geo
/// component. The axis picks the hemisphere letters on the DMS side.
Value convert_representation(const Value& value, const std::string& from, const std::string& to,
                             GeoAxis axis = GeoAxis::Latitude);

inline constexpr double kEarthRadiusKm = 6371.0;

/// Haversine great-circle distance on a sphere of radius 6371 km.
double great_circle_distance_km(const GeoValue& a, const GeoValue& b);

using Clock = std::chrono::system_clock;
using TimePoint = Clock::time_point;

/// Millisecond-precision UTC timestamps, e.g. "2026-08-10T12:30:00.250Z".
std::string to_iso8601(TimePoint t);
TimePoint from_iso8601(const std::string& text);

uint64_t fnv1a64(const std::string& data, uint64_t seed = 14695981039346656037ULL);
std::string to_hex(uint64_t value);

}  // namespace acas
