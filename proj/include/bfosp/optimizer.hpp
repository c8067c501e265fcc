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

#pragma once

// Functional Bayesian optimisation loop with dynamic Bernstein order.
//
// Each round: fit the surrogate on all observations, suggest a batch under
// the shape prior, collect outcomes, then check the incumbent for order
// underspecification (adjacent coefficient jump close to the unit range) and
// the fixed increment schedule. A fired trigger raises the order by one and
// re-expresses every stored coefficient vector exactly at the new order.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bfosp/acquisition.hpp"
#include "bfosp/bernstein.hpp"
#include "bfosp/gp.hpp"

namespace bfosp {

struct OptimizerConfig {
  int start_order = 5;
  int max_order = 10;
  double trigger_fraction = 0.95;
  /// Fixed increment period omega: order rises when m % omega == 0.
  int fixed_increment_period = 10;
  int max_iterations = 100;
  AcquisitionConfig acquisition;
  ShapePrior prior;
  std::vector<Bounds> aux_bounds;
  RescaleRecord rescale;
  /// Objective is minimised: told values are negated before storage.
  bool negate = false;

  void validate() const;

  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

enum class Trigger { kNone, kDerivative, kSchedule };

std::string_view to_string(Trigger trigger);
Trigger trigger_from_string(std::string_view name);

/// Audit entry for one completed round.
struct IterationRecord {
  int iteration = 0;
  int order_before = 0;
  int order_after = 0;
  /// Reason for the increment. When both checks fire, kDerivative.
  Trigger trigger = Trigger::kNone;
  bool derivative_fired = false;
  bool schedule_fired = false;
  /// A trigger fired at max_order and was ignored.
  bool suppressed = false;
  double max_difference = 0.0;
  double incumbent_value = 0.0;
  std::vector<DesignPoint> suggested;
  std::vector<double> observed;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

struct PendingSuggestion {
  std::string token;
  DesignPoint point;
  /// Stored (sign-adjusted) outcome once told.
  std::optional<double> value;

  friend bool operator==(const PendingSuggestion&, const PendingSuggestion&) = default;
};

struct StoredObservation {
  Observation obs;
  std::string token;

  friend bool operator==(const StoredObservation&, const StoredObservation&) = default;
};

struct CampaignState {
  static constexpr int kSchemaVersion = 1;

  int schema_version = kSchemaVersion;
  std::string campaign_id;
  OptimizerConfig config;
  int current_order = 0;
  /// Completed rounds m.
  int iteration = 0;
  /// Number of batches generated; with the seed it fixes the RNG stream.
  std::uint64_t ask_counter = 0;
  std::vector<StoredObservation> observations;
  std::vector<PendingSuggestion> pending;
  std::vector<IterationRecord> log;

  bool finished() const { return iteration >= config.max_iterations; }
  SearchSpace search_space() const;
  std::vector<Observation> data() const;

  /// StateError when an invariant is broken (mixed orders, duplicate tokens).
  void validate() const;

  friend bool operator==(const CampaignState&, const CampaignState&) = default;
};

/// d = max adjacent |a_{v+1} - a_v| of the incumbent; true when
/// d > trigger_fraction * range_width.
bool underspecification_check(std::span<const double> incumbent_alpha, double trigger_fraction,
                              double range_width = 1.0);

/// Every alpha elevated by one order; values and aux unchanged. StateError if
/// an observation is not at `from_order`.
std::vector<Observation> elevate_history(std::span<const Observation> data, int from_order);

/// Maximal value; ties go to the earliest iteration, then earliest position.
/// NotFoundError on empty data.
const Observation& incumbent(std::span<const Observation> data);

CampaignState initial_state(OptimizerConfig config, std::string campaign_id);

/// Pending batch, generating one if none is outstanding. Empty once the
/// iteration budget is spent. Idempotent while the batch is unresolved.
const std::vector<PendingSuggestion>& ask(CampaignState& state);

/// Stores the (already sign-adjusted) value for a pending token and appends
/// the observation. ProtocolError for unknown or already-resolved tokens.
void record(CampaignState& state, std::string_view token, double stored_value);

/// Finishes a fully resolved round: trigger checks, elevation, audit record,
/// and the next batch. ProtocolError if a pending token is unresolved.
const IterationRecord& complete_round(CampaignState& state);

struct StepResult {
  CampaignState state;
  std::vector<PendingSuggestion> suggestions;
};

/// One full loop body: `observed_values` (user units, same order as the
/// pending batch) are recorded and the round is completed.
StepResult step(CampaignState state, std::span<const double> observed_values);

using Objective = std::function<double(const BernsteinPoly&, std::span<const double> aux)>;

/// Closed-loop driver: asks, evaluates `objective` on each suggestion, and
/// completes rounds until the budget or `rounds` is reached.
CampaignState run_closed_loop(CampaignState state, const Objective& objective, int rounds);

}  // namespace bfosp
