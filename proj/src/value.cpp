#include "acas/value.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>

namespace acas {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Unavailable: return "Unavailable";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::MalformedRepresentation: return "MalformedRepresentation";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownAggregate: return "UnknownAggregate";
    case ErrorCode::PathConflict: return "PathConflict";
    case ErrorCode::WrongMode: return "WrongMode";
    case ErrorCode::UnknownPath: return "UnknownPath";
    case ErrorCode::ProviderUnreachable: return "ProviderUnreachable";
    case ErrorCode::UnknownService: return "UnknownService";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::DuplicateAdaptation: return "DuplicateAdaptation";
    case ErrorCode::UnknownAdaptation: return "UnknownAdaptation";
    case ErrorCode::UnknownOperation: return "UnknownOperation";
    case ErrorCode::AdaptationFailure: return "AdaptationFailure";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : AcasError(ErrorCode::ValidationError, [&diagnostics] {
        std::string msg = "validation failed:";
        for (const auto& d : diagnostics) msg += "\n  [" + d.subject + "] " + d.rule + ": " + d.message;
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

const char* to_string(ValueType type) {
  switch (type) {
    case ValueType::Number: return "number";
    case ValueType::String: return "string";
    case ValueType::Boolean: return "boolean";
    case ValueType::Geo: return "geo";
    case ValueType::Record: return "record";
  }
  return "unknown";
}

ValueType value_type_from_string(const std::string& name) {
  if (name == "number") return ValueType::Number;
  if (name == "string") return ValueType::String;
  if (name == "boolean") return ValueType::Boolean;
  if (name == "geo") return ValueType::Geo;
  if (name == "record") return ValueType::Record;
  throw AcasError(ErrorCode::ParseError, "unknown value type '" + name + "'", name);
}

bool is_geo(const Value& value) {
  return value.is_object() && value.size() == 2 && value.contains("latitude") &&
         value.contains("longitude") && value["latitude"].is_number() &&
         value["longitude"].is_number();
}

ValueType value_type(const Value& value) {
  if (value.is_number()) return ValueType::Number;
  if (value.is_string()) return ValueType::String;
  if (value.is_boolean()) return ValueType::Boolean;
  if (is_geo(value)) return ValueType::Geo;
  if (value.is_object() || value.is_array()) return ValueType::Record;
  throw AcasError(ErrorCode::TypeMismatch, "value outside the context value domain: " + value.dump());
}

GeoValue GeoValue::from_value(const Value& value) {
  if (!is_geo(value)) {
    throw AcasError(ErrorCode::MalformedRepresentation, "not a geo value: " + value.dump());
  }
  GeoValue geo{value["latitude"].get<double>(), value["longitude"].get<double>()};
  if (geo.latitude < -90.0 || geo.latitude > 90.0) {
    throw AcasError(ErrorCode::MalformedRepresentation,
                    "latitude out of [-90, 90]: " + std::to_string(geo.latitude));
  }
  if (geo.longitude < -180.0 || geo.longitude > 180.0) {
    throw AcasError(ErrorCode::MalformedRepresentation,
                    "longitude out of [-180, 180]: " + std::to_string(geo.longitude));
  }
  return geo;
}

Value GeoValue::to_value() const { return Value{{"latitude", latitude}, {"longitude", longitude}}; }

DmsValue DmsValue::from_value(const Value& value) {
  if (!value.is_object() || !value.contains("degrees") || !value.contains("minutes") ||
      !value.contains("seconds") || !value.contains("hemisphere")) {
    throw AcasError(ErrorCode::MalformedRepresentation, "not a DMS value: " + value.dump());
  }
  DmsValue dms;
  dms.degrees = value["degrees"].get<int>();
  dms.minutes = value["minutes"].get<int>();
  dms.seconds = value["seconds"].get<double>();
  const auto hemi = value["hemisphere"].get<std::string>();
  if (hemi.size() != 1) {
    throw AcasError(ErrorCode::MalformedRepresentation, "bad hemisphere '" + hemi + "'");
  }
  dms.hemisphere = hemi[0];
  return dms;
}

Value DmsValue::to_value() const {
  return Value{{"degrees", degrees},
               {"minutes", minutes},
               {"seconds", seconds},
               {"hemisphere", std::string(1, hemisphere)}};
}

double dms_to_dd(const DmsValue& dms) {
  if (dms.minutes < 0 || dms.minutes >= 60) {
    throw AcasError(ErrorCode::MalformedRepresentation,
                    "minutes out of [0, 60): " + std::to_string(dms.minutes));
  }
  if (dms.seconds < 0.0 || dms.seconds >= 60.0) {
    throw AcasError(ErrorCode::MalformedRepresentation,
                    "seconds out of [0, 60): " + std::to_string(dms.seconds));
  }
  if (dms.degrees < 0) {
    throw AcasError(ErrorCode::MalformedRepresentation,
                    "degrees must be non-negative, hemisphere carries the sign");
  }
  switch (dms.hemisphere) {
    case 'N': case 'S': case 'E': case 'W': break;
    default:
      throw AcasError(ErrorCode::MalformedRepresentation,
                      std::string("bad hemisphere '") + dms.hemisphere + "'");
  }
  const double magnitude = dms.degrees + dms.minutes / 60.0 + dms.seconds / 3600.0;
  const bool negative = dms.hemisphere == 'S' || dms.hemisphere == 'W';
  return negative ? -magnitude : magnitude;
}

DmsValue dd_to_dms(double dd, GeoAxis axis) {
  const double limit = axis == GeoAxis::Latitude ? 90.0 : 180.0;
  if (dd < -limit || dd > limit) {
    throw AcasError(ErrorCode::MalformedRepresentation,
                    "decimal degrees out of range: " + std::to_string(dd));
  }
  DmsValue dms;
  const bool negative = dd < 0.0;
  if (axis == GeoAxis::Latitude) {
    dms.hemisphere = negative ? 'S' : 'N';
  } else {
    dms.hemisphere = negative ? 'W' : 'E';
  }
  double magnitude = std::abs(dd);
  dms.degrees = static_cast<int>(magnitude);
  double rem = (magnitude - dms.degrees) * 60.0;
  dms.minutes = static_cast<int>(rem);
  double seconds = (rem - dms.minutes) * 60.0;
  // Round seconds to 1e-6 and carry overflow back up.
  seconds = std::round(seconds * 1e6) / 1e6;
  if (seconds >= 60.0) {
    seconds -= 60.0;
    if (++dms.minutes >= 60) {
      dms.minutes -= 60;
      ++dms.degrees;
    }
  }
  dms.seconds = seconds;
  return dms;
}

Value convert_representation(const Value& value, const std::string& from, const std::string& to,
                             GeoAxis axis) {
  if (from == to) {
    throw AcasError(ErrorCode::MalformedRepresentation, "source and target representation are equal");
  }
  if (from == "DMS" && to == "DD") return dms_to_dd(DmsValue::from_value(value));
  if (from == "DD" && to == "DMS") {
    if (!value.is_number()) {
      throw AcasError(ErrorCode::MalformedRepresentation, "DD value must be a number");
    }
    return dd_to_dms(value.get<double>(), axis).to_value();
  }
  throw AcasError(ErrorCode::MalformedRepresentation,
                  "unsupported representation conversion " + from + " -> " + to);
}

double great_circle_distance_km(const GeoValue& a, const GeoValue& b) {
  constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
  const double lat1 = a.latitude * kDegToRad;
  const double lat2 = b.latitude * kDegToRad;
  const double dlat = (b.latitude - a.latitude) * kDegToRad;
  const double dlon = (b.longitude - a.longitude) * kDegToRad;
  const double sin_dlat = std::sin(dlat / 2.0);
  const double sin_dlon = std::sin(dlon / 2.0);
  const double h = sin_dlat * sin_dlat + std::cos(lat1) * std::cos(lat2) * sin_dlon * sin_dlon;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

std::string to_iso8601(TimePoint t) {
  const auto secs = std::chrono::time_point_cast<std::chrono::seconds>(t);
  const auto millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(t - secs).count();
  const std::time_t tt = Clock::to_time_t(secs);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(millis));
  return buf;
}

TimePoint from_iso8601(const std::string& text) {
  std::tm tm{};
  int millis = 0;
  const int matched = std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d.%dZ", &tm.tm_year, &tm.tm_mon,
                                  &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &millis);
  if (matched < 6) {
    throw AcasError(ErrorCode::ParseError, "bad ISO-8601 timestamp '" + text + "'");
  }
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  const std::time_t tt = timegm(&tm);
  return Clock::from_time_t(tt) + std::chrono::milliseconds(millis);
}

uint64_t fnv1a64(const std::string& data, uint64_t seed) {
  uint64_t hash = seed;
  for (const unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string to_hex(uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

}  // namespace acas
