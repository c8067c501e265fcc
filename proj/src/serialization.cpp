// Copyright 2026 The bfosp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bfosp/serialization.hpp"

#include <cmath>
#include <string>

#include "bfosp/error.hpp"

namespace bfosp {

namespace {

// Strict field access for persisted state; every failure names its path.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw StateError("campaign schema: " + (path.empty() ? std::string("/") : path) + ": " + what);
  }

  const Json& field(const char* key) const {
    auto it = j_.find(key);
    if (it == j_.end()) fail(path_ + "/" + key, "missing field");
    return *it;
  }

  std::string at(const char* key) const { return path_ + "/" + key; }

  double number(const char* key) const {
    const Json& v = field(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    return v.get<double>();
  }

  int integer(const char* key) const {
    const Json& v = field(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(const char* key) const {
    const Json& v = field(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(at(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const char* key) const {
    const Json& v = field(key);
    if (!v.is_boolean()) fail(at(key), "expected a boolean");
    return v.get<bool>();
  }

  std::string string(const char* key) const {
    const Json& v = field(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  const Json& array(const char* key) const {
    const Json& v = field(key);
    if (!v.is_array()) fail(at(key), "expected an array");
    return v;
  }

  std::vector<double> numbers(const char* key) const {
    const Json& v = array(key);
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(at(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

 private:
  const Json& j_;
  std::string path_;
};

DesignPoint point_from(const Json& j, const std::string& path) {
  Reader r(j, path);
  return {r.numbers("alpha"), r.numbers("aux")};
}

// Lenient config access: absent keys keep defaults, wrong types are errors.
template <typename T>
void maybe(const Json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

ShapePrior prior_from_config(const Json& j) {
  ShapePrior prior;
  if (j.is_string()) {
    prior.kind = shape_kind_from_string(j.get<std::string>());
    return prior;
  }
  if (!j.is_object()) throw ConfigError("prior must be a string or an object");
  std::string kind = "range";
  maybe(j, "kind", kind);
  prior.kind = shape_kind_from_string(kind);
  auto it = j.find("mode_index");
  if (it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) throw ConfigError("prior.mode_index must be an integer");
    prior.mode_index = it->get<int>();
  }
  return prior;
}

Bounds bounds_from_config(const Json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_object()) {
    Bounds b;
    maybe(j, "lo", b.lo);
    maybe(j, "hi", b.hi);
    return b;
  }
  throw ConfigError("aux bound must be [lo, hi] or {\"lo\", \"hi\"}");
}

}  // namespace

Json to_json(const CurveSample& curve) { return {{"grid", curve.grid}, {"values", curve.values}}; }

CurveSample curve_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("grid") || !j.contains("values")) {
    throw DomainError("curve JSON needs \"grid\" and \"values\"");
  }
  CurveSample c;
  try {
    c.grid = j.at("grid").get<std::vector<double>>();
    c.values = j.at("values").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("curve JSON: ") + e.what());
  }
  c.validate();
  return c;
}

Json to_json(const ShapePrior& prior) {
  Json j{{"kind", std::string(to_string(prior.kind))}};
  j["mode_index"] = prior.mode_index ? Json(*prior.mode_index) : Json(nullptr);
  return j;
}

Json to_json(const AcquisitionConfig& cfg) {
  return {{"delta", cfg.delta},
          {"candidate_count", cfg.candidate_count},
          {"refine_steps", cfg.refine_steps},
          {"batch_size", cfg.batch_size},
          {"rng_seed", cfg.rng_seed}};
}

Json to_json(const OptimizerConfig& cfg) {
  Json aux = Json::array();
  for (const Bounds& b : cfg.aux_bounds) aux.push_back({b.lo, b.hi});
  return {{"start_order", cfg.start_order},
          {"max_order", cfg.max_order},
          {"trigger_fraction", cfg.trigger_fraction},
          {"fixed_increment_period", cfg.fixed_increment_period},
          {"max_iterations", cfg.max_iterations},
          {"acquisition", to_json(cfg.acquisition)},
          {"prior", to_json(cfg.prior)},
          {"aux_bounds", aux},
          {"rescale",
           {{"t_min", cfg.rescale.t_min},
            {"t_max", cfg.rescale.t_max},
            {"y_min", cfg.rescale.y_min},
            {"y_max", cfg.rescale.y_max}}},
          {"negate", cfg.negate}};
}

OptimizerConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  OptimizerConfig cfg;
  maybe(j, "start_order", cfg.start_order);
  maybe(j, "max_order", cfg.max_order);
  maybe(j, "trigger_fraction", cfg.trigger_fraction);
  maybe(j, "fixed_increment_period", cfg.fixed_increment_period);
  maybe(j, "max_iterations", cfg.max_iterations);
  maybe(j, "negate", cfg.negate);
  if (auto it = j.find("acquisition"); it != j.end()) {
    if (!it->is_object()) throw ConfigError("acquisition must be an object");
    maybe(*it, "delta", cfg.acquisition.delta);
    maybe(*it, "candidate_count", cfg.acquisition.candidate_count);
    maybe(*it, "refine_steps", cfg.acquisition.refine_steps);
    maybe(*it, "batch_size", cfg.acquisition.batch_size);
    maybe(*it, "rng_seed", cfg.acquisition.rng_seed);
  }
  if (auto it = j.find("prior"); it != j.end() && !it->is_null()) cfg.prior = prior_from_config(*it);
  if (auto it = j.find("aux_bounds"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ConfigError("aux_bounds must be an array");
    for (const auto& b : *it) cfg.aux_bounds.push_back(bounds_from_config(b));
  }
  if (auto it = j.find("rescale"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw ConfigError("rescale must be an object");
    maybe(*it, "t_min", cfg.rescale.t_min);
    maybe(*it, "t_max", cfg.rescale.t_max);
    maybe(*it, "y_min", cfg.rescale.y_min);
    maybe(*it, "y_max", cfg.rescale.y_max);
  }
  cfg.validate();
  return cfg;
}

Json to_json(const DesignPoint& x) { return {{"alpha", x.alpha}, {"aux", x.aux}}; }

Json to_json(const IterationRecord& rec) {
  Json suggested = Json::array();
  for (const auto& p : rec.suggested) suggested.push_back(to_json(p));
  return {{"iteration", rec.iteration},
          {"order_before", rec.order_before},
          {"order_after", rec.order_after},
          {"trigger", std::string(to_string(rec.trigger))},
          {"derivative_fired", rec.derivative_fired},
          {"schedule_fired", rec.schedule_fired},
          {"suppressed", rec.suppressed},
          {"max_difference", rec.max_difference},
          {"incumbent_value", rec.incumbent_value},
          {"suggested", suggested},
          {"observed", rec.observed}};
}

Json to_json(const CampaignState& state) {
  Json observations = Json::array();
  for (const auto& s : state.observations) {
    observations.push_back({{"point", to_json(s.obs.point)},
                            {"value", s.obs.value},
                            {"batch_id", s.obs.batch_id},
                            {"iteration", s.obs.iteration},
                            {"token", s.token}});
  }
  Json pending = Json::array();
  for (const auto& p : state.pending) {
    pending.push_back({{"token", p.token},
                       {"point", to_json(p.point)},
                       {"value", p.value ? Json(*p.value) : Json(nullptr)}});
  }
  Json log = Json::array();
  for (const auto& r : state.log) log.push_back(to_json(r));
  return {{"schema_version", state.schema_version},
          {"campaign_id", state.campaign_id},
          {"config", to_json(state.config)},
          {"current_order", state.current_order},
          {"iteration", state.iteration},
          {"rng", {{"seed", state.config.acquisition.rng_seed}, {"draw_counter", state.ask_counter}}},
          {"observations", observations},
          {"pending", pending},
          {"log", log}};
}

CampaignState state_from_json(const Json& j) {
  Reader r(j, "");
  CampaignState state;
  state.schema_version = r.integer("schema_version");
  if (state.schema_version != CampaignState::kSchemaVersion) {
    Reader::fail("/schema_version", "unsupported version " + std::to_string(state.schema_version));
  }
  state.campaign_id = r.string("campaign_id");
  try {
    state.config = config_from_json(r.field("config"));
  } catch (const ConfigError& e) {
    Reader::fail("/config", e.what());
  }
  state.current_order = r.integer("current_order");
  state.iteration = r.integer("iteration");
  {
    Reader rng(r.field("rng"), "/rng");
    if (rng.unsigned_integer("seed") != state.config.acquisition.rng_seed) {
      Reader::fail("/rng/seed", "does not match config.acquisition.rng_seed");
    }
    state.ask_counter = rng.unsigned_integer("draw_counter");
  }
  const Json& obs = r.array("observations");
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const std::string path = "/observations/" + std::to_string(i);
    Reader o(obs[i], path);
    StoredObservation s;
    s.obs.point = point_from(o.field("point"), path + "/point");
    s.obs.value = o.number("value");
    s.obs.batch_id = o.integer("batch_id");
    s.obs.iteration = o.integer("iteration");
    s.token = o.string("token");
    state.observations.push_back(std::move(s));
  }
  const Json& pending = r.array("pending");
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const std::string path = "/pending/" + std::to_string(i);
    Reader p(pending[i], path);
    PendingSuggestion s;
    s.token = p.string("token");
    s.point = point_from(p.field("point"), path + "/point");
    const Json& v = p.field("value");
    if (!v.is_null()) {
      if (!v.is_number()) Reader::fail(path + "/value", "expected a number or null");
      s.value = v.get<double>();
    }
    state.pending.push_back(std::move(s));
  }
  const Json& log = r.array("log");
  for (std::size_t i = 0; i < log.size(); ++i) {
    const std::string path = "/log/" + std::to_string(i);
    Reader l(log[i], path);
    IterationRecord rec;
    rec.iteration = l.integer("iteration");
    rec.order_before = l.integer("order_before");
    rec.order_after = l.integer("order_after");
    try {
      rec.trigger = trigger_from_string(l.string("trigger"));
    } catch (const StateError& e) {
      Reader::fail(path + "/trigger", e.what());
    }
    rec.derivative_fired = l.boolean("derivative_fired");
    rec.schedule_fired = l.boolean("schedule_fired");
    rec.suppressed = l.boolean("suppressed");
    rec.max_difference = l.number("max_difference");
    rec.incumbent_value = l.number("incumbent_value");
    const Json& sug = l.array("suggested");
    for (std::size_t k = 0; k < sug.size(); ++k) {
      rec.suggested.push_back(point_from(sug[k], path + "/suggested/" + std::to_string(k)));
    }
    rec.observed = l.numbers("observed");
    state.log.push_back(std::move(rec));
  }
  state.validate();
  return state;
}

Json to_json(const ExternalRequest& req) {
  return {{"token", req.token}, {"curve", to_json(req.curve)}, {"aux", req.aux}};
}

Json to_json(const ExternalResponse& resp) { return {{"token", resp.token}, {"y", resp.y}}; }

ExternalResponse response_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("token") || !j.contains("y") || !j["token"].is_string() ||
      !j["y"].is_number()) {
    throw ProtocolError("response must be {\"token\": string, \"y\": number}");
  }
  return {j["token"].get<std::string>(), j["y"].get<double>()};
}

SyntheticTarget target_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("synthetic target must be an object");
  SyntheticTarget t;
  std::string shape = "decreasing";
  maybe(j, "shape", shape);
  t.shape = target_shape_from_string(shape);
  maybe(j, "target_vector", t.target_vector);
  maybe(j, "spread", t.spread);
  t.validate();
  return t;
}

Json to_json(const SyntheticTarget& target) {
  return {{"shape", std::string(to_string(target.shape))},
          {"target_vector", target.target_vector},
          {"spread", target.spread}};
}

}  // namespace bfosp
