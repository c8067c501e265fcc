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

#include "bfosp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "bfosp/error.hpp"

namespace bfosp {

void OptimizerConfig::validate() const {
  if (start_order < 0) throw ConfigError("start_order must be >= 0");
  if (start_order > max_order) throw ConfigError("start_order must not exceed max_order");
  if (!(trigger_fraction > 0.0 && trigger_fraction <= 1.0)) {
    throw ConfigError("trigger_fraction must lie in (0, 1]");
  }
  if (fixed_increment_period < 1) throw ConfigError("fixed_increment_period must be >= 1");
  if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  acquisition.validate();
  prior.validate(start_order);
  for (const Bounds& b : aux_bounds) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.hi > b.lo)) {
      throw ConfigError("aux bounds need finite lo < hi");
    }
  }
  rescale.validate();
}

std::string_view to_string(Trigger trigger) {
  switch (trigger) {
    case Trigger::kNone:
      return "none";
    case Trigger::kDerivative:
      return "derivative";
    case Trigger::kSchedule:
      return "schedule";
  }
  return "none";
}

Trigger trigger_from_string(std::string_view name) {
  if (name == "none") return Trigger::kNone;
  if (name == "derivative") return Trigger::kDerivative;
  if (name == "schedule") return Trigger::kSchedule;
  throw StateError("unknown trigger '" + std::string(name) + "'");
}

SearchSpace CampaignState::search_space() const {
  return SearchSpace{current_order, config.prior, InputSpace{config.aux_bounds}};
}

std::vector<Observation> CampaignState::data() const {
  std::vector<Observation> out;
  out.reserve(observations.size());
  for (const auto& s : observations) out.push_back(s.obs);
  return out;
}

void CampaignState::validate() const {
  if (schema_version != kSchemaVersion) {
    throw StateError("unsupported schema_version " + std::to_string(schema_version));
  }
  if (current_order < config.start_order || current_order > config.max_order) {
    throw StateError("current_order " + std::to_string(current_order) + " outside [" +
                     std::to_string(config.start_order) + ", " +
                     std::to_string(config.max_order) + "]");
  }
  const auto expected = static_cast<std::size_t>(current_order) + 1;
  std::set<std::string> tokens;
  for (const auto& s : observations) {
    if (s.obs.point.alpha.size() != expected) {
      throw StateError("observation alpha length " + std::to_string(s.obs.point.alpha.size()) +
                       " does not match current order " + std::to_string(current_order));
    }
    if (!std::isfinite(s.obs.value)) throw StateError("observation value is not finite");
    if (!s.token.empty() && !tokens.insert(s.token).second) {
      throw StateError("duplicate observation token " + s.token);
    }
  }
  std::set<std::string> pending_tokens;
  for (const auto& p : pending) {
    if (!pending_tokens.insert(p.token).second) throw StateError("duplicate pending token " + p.token);
    if (p.point.alpha.size() != expected) {
      throw StateError("pending suggestion " + p.token + " is not at the current order");
    }
  }
  for (const auto& r : log) {
    if (r.order_after != r.order_before && r.order_after != r.order_before + 1) {
      throw StateError("log record changes order by more than one");
    }
  }
}

bool underspecification_check(std::span<const double> incumbent_alpha, double trigger_fraction,
                              double range_width) {
  return max_adjacent_difference(incumbent_alpha) > trigger_fraction * range_width;
}

std::vector<Observation> elevate_history(std::span<const Observation> data, int from_order) {
  const auto expected = static_cast<std::size_t>(from_order) + 1;
  std::vector<Observation> out;
  out.reserve(data.size());
  for (const auto& obs : data) {
    if (obs.point.alpha.size() != expected) {
      throw StateError("history holds an observation of order " +
                       std::to_string(static_cast<int>(obs.point.alpha.size()) - 1) +
                       ", expected " + std::to_string(from_order));
    }
    Observation e = obs;
    e.point.alpha = elevate(obs.point.alpha);
    out.push_back(std::move(e));
  }
  return out;
}

const Observation& incumbent(std::span<const Observation> data) {
  if (data.empty()) throw NotFoundError("no observations yet, so no incumbent");
  const Observation* best = &data.front();
  for (const auto& obs : data) {
    if (obs.value > best->value ||
        (obs.value == best->value && obs.iteration < best->iteration)) {
      best = &obs;
    }
  }
  return *best;
}

CampaignState initial_state(OptimizerConfig config, std::string campaign_id) {
  config.validate();
  CampaignState state;
  state.campaign_id = std::move(campaign_id);
  state.current_order = config.start_order;
  state.config = std::move(config);
  return state;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string make_token(std::uint64_t seed, std::uint64_t ask_index, std::size_t slot) {
  const std::uint64_t h = splitmix64(splitmix64(seed ^ (ask_index << 20)) ^ slot);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%llu-%zu-%08llx", static_cast<unsigned long long>(ask_index),
                slot, static_cast<unsigned long long>(h & 0xffffffffULL));
  return buf;
}

void generate_batch(CampaignState& state) {
  const SearchSpace space = state.search_space();
  const std::vector<Observation> data = state.data();
  const AcquisitionConfig& cfg = state.config.acquisition;
  Rng rng = make_rng(cfg.rng_seed, state.ask_counter);
  const int t = static_cast<int>(data.size()) + 1;

  std::vector<Selection> batch;
  if (data.empty()) {
    batch = suggest_batch(nullptr, space, cfg, t, rng);
  } else {
    std::vector<std::vector<double>> inputs;
    std::vector<double> outputs;
    for (const auto& obs : data) {
      inputs.push_back(space.inputs.features(obs.point));
      outputs.push_back(obs.value);
    }
    const KernelParams params = select_hyperparameters(inputs, outputs);
    const StandardizedGp gp = StandardizedGp::fit(std::move(inputs), outputs, params);
    batch = suggest_batch(&gp.surrogate(), space, cfg, t, rng);
  }

  state.pending.clear();
  for (std::size_t j = 0; j < batch.size(); ++j) {
    state.pending.push_back(
        {make_token(cfg.rng_seed, state.ask_counter, j), std::move(batch[j].point), {}});
  }
  ++state.ask_counter;
}

}  // namespace

const std::vector<PendingSuggestion>& ask(CampaignState& state) {
  if (state.pending.empty() && !state.finished()) generate_batch(state);
  return state.pending;
}

void record(CampaignState& state, std::string_view token, double stored_value) {
  if (!std::isfinite(stored_value)) throw ProtocolError("observed value is not finite");
  auto it = std::find_if(state.pending.begin(), state.pending.end(),
                         [&](const PendingSuggestion& p) { return p.token == token; });
  if (it == state.pending.end()) {
    throw ProtocolError("token '" + std::string(token) + "' is not pending");
  }
  if (it->value) throw ProtocolError("token '" + std::string(token) + "' was already told");
  it->value = stored_value;
  Observation obs;
  obs.point = it->point;
  obs.value = stored_value;
  obs.batch_id = static_cast<int>(state.ask_counter) - 1;
  obs.iteration = state.iteration + 1;
  state.observations.push_back({std::move(obs), it->token});
}

const IterationRecord& complete_round(CampaignState& state) {
  if (state.pending.empty()) throw ProtocolError("no batch is outstanding");
  for (const auto& p : state.pending) {
    if (!p.value) throw ProtocolError("token '" + p.token + "' has not been told");
  }
  const OptimizerConfig& cfg = state.config;
  IterationRecord rec;
  rec.iteration = ++state.iteration;
  rec.order_before = state.current_order;
  for (const auto& p : state.pending) {
    rec.suggested.push_back(p.point);
    rec.observed.push_back(cfg.negate ? -*p.value : *p.value);
  }

  const std::vector<Observation> data = state.data();
  const Observation& best = incumbent(data);
  rec.incumbent_value = cfg.negate ? -best.value : best.value;
  rec.max_difference = max_adjacent_difference(best.point.alpha);
  rec.derivative_fired = underspecification_check(best.point.alpha, cfg.trigger_fraction);
  rec.schedule_fired = rec.iteration % cfg.fixed_increment_period == 0;

  if (rec.derivative_fired || rec.schedule_fired) {
    rec.trigger = rec.derivative_fired ? Trigger::kDerivative : Trigger::kSchedule;
    if (state.current_order < cfg.max_order) {
      const std::vector<Observation> elevated = elevate_history(data, state.current_order);
      for (std::size_t i = 0; i < elevated.size(); ++i) {
        state.observations[i].obs = elevated[i];
      }
      ++state.current_order;
    } else {
      rec.suppressed = true;
    }
  }
  rec.order_after = state.current_order;

  state.pending.clear();
  state.log.push_back(std::move(rec));
  ask(state);
  return state.log.back();
}

StepResult step(CampaignState state, std::span<const double> observed_values) {
  ask(state);
  if (observed_values.size() != state.pending.size()) {
    throw ProtocolError("expected " + std::to_string(state.pending.size()) +
                        " observed values, got " + std::to_string(observed_values.size()));
  }
  for (std::size_t j = 0; j < observed_values.size(); ++j) {
    const double y = state.config.negate ? -observed_values[j] : observed_values[j];
    record(state, state.pending[j].token, y);
  }
  complete_round(state);
  StepResult out{std::move(state), {}};
  out.suggestions = out.state.pending;
  return out;
}

CampaignState run_closed_loop(CampaignState state, const Objective& objective, int rounds) {
  for (int r = 0; r < rounds && !state.finished(); ++r) {
    const auto& batch = ask(state);
    std::vector<double> ys;
    ys.reserve(batch.size());
    for (const auto& p : batch) ys.push_back(objective(BernsteinPoly(p.point.alpha), p.point.aux));
    state = step(std::move(state), ys).state;
  }
  return state;
}

}  // namespace bfosp
