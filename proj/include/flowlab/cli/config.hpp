#pragma once

// Flat JSON scenario configs. Each scenario reads its keys through a
// ConfigReader, which range-checks values, fills defaults and records the
// resolved value for the config echo. Keys nobody read are rejected.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

#include "flowlab/cli/report.hpp"
#include "flowlab/flows/config.hpp"

namespace flowlab::cli {

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"verify-identities", "run-flow", "monotonicity", "harnack", "solitons"};
  return names;
}

inline Json load_config(const std::filesystem::path& p) {
  std::ifstream f(p);
  if (!f) throw Error(ErrorKind::IoError, "cannot read config " + p.string());
  try {
    Json j = Json::parse(f);
    if (!j.is_object()) throw Error(ErrorKind::Validation, "config must be a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Validation, std::string("config is not valid JSON: ") + e.what());
  }
}

class ConfigReader {
 public:
  explicit ConfigReader(Json raw) : raw_(std::move(raw)) {
    if (!raw_.is_object()) throw Error(ErrorKind::Validation, "config must be a JSON object");
  }

  double number(const std::string& key, double def, double lo, double hi) {
    double v = def;
    if (const auto* j = find(key)) {
      if (!j->is_number()) fail(key, "must be a number");
      v = j->get<double>();
    }
    if (!std::isfinite(v) || v < lo || v > hi)
      fail(key, "must lie in [" + format_double(lo) + ", " + format_double(hi) + "], got " + format_double(v));
    resolved_[key] = v;
    return v;
  }

  /// Strictly positive number no larger than hi.
  double positive(const std::string& key, double def, double hi = 1e300) {
    const double v = number(key, def, 0.0, hi);
    if (!(v > 0.0)) fail(key, "must be positive");
    return v;
  }

  std::int64_t integer(const std::string& key, std::int64_t def, std::int64_t lo, std::int64_t hi) {
    std::int64_t v = def;
    if (const auto* j = find(key)) {
      if (!j->is_number_integer()) fail(key, "must be an integer");
      v = j->get<std::int64_t>();
    }
    if (v < lo || v > hi) fail(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    resolved_[key] = v;
    return v;
  }

  std::string choice(const std::string& key, const std::string& def, std::initializer_list<const char*> allowed) {
    std::string v = def;
    if (const auto* j = find(key)) {
      if (!j->is_string()) fail(key, "must be a string");
      v = j->get<std::string>();
    }
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return v == a; })) {
      std::string list;
      for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
      fail(key, "must be one of {" + list + "}, got '" + v + "'");
    }
    resolved_[key] = v;
    return v;
  }

  std::string text(const std::string& key, const std::string& def) {
    std::string v = def;
    if (const auto* j = find(key)) {
      if (!j->is_string()) fail(key, "must be a string");
      v = j->get<std::string>();
    }
    resolved_[key] = v;
    return v;
  }

  bool flag(const std::string& key, bool def) {
    bool v = def;
    if (const auto* j = find(key)) {
      if (!j->is_boolean()) fail(key, "must be true or false");
      v = j->get<bool>();
    }
    resolved_[key] = v;
    return v;
  }

  /// Records a value the scenario derived itself (e.g. a default tied to another key).
  void set(const std::string& key, Json v) { resolved_[key] = std::move(v); }

  bool has(const std::string& key) const { return raw_.contains(key); }

  /// Call after every key has been read: unknown keys are schema errors.
  void finish() const {
    for (const auto& [k, v] : raw_.items())
      if (!seen_.count(k)) throw Error(ErrorKind::Validation, "unknown config key '" + k + "'");
  }

  const Json& resolved() const { return resolved_; }

  [[noreturn]] static void fail(const std::string& key, const std::string& why) {
    throw Error(ErrorKind::Validation, "config key '" + key + "' " + why);
  }

 private:
  const Json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = raw_.find(key);
    return it == raw_.end() ? nullptr : &*it;
  }

  Json raw_;
  Json resolved_ = Json::object();
  std::set<std::string> seen_;
};

inline flows::QMode parse_q_mode(const std::string& s) {
  if (s == "ricci") return flows::QMode::Ricci;
  if (s == "backward_ricci") return flows::QMode::BackwardRicci;
  return flows::QMode::Static;
}

inline flows::KMode parse_k_mode(const std::string& s) {
  if (s == "scalar_curvature") return flows::KMode::ScalarCurvature;
  if (s == "zero") return flows::KMode::Zero;
  return flows::KMode::TraceQ;
}

/// Process exit code for a library error.
inline int exit_code(ErrorKind k) {
  if (is_numerical_failure(k)) return 3;
  if (k == ErrorKind::IoError) return 1;
  return 2;
}

}  // namespace flowlab::cli
