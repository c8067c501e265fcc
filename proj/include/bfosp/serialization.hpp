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

// JSON forms of the public types. Parsing of persisted campaign state is
// strict and raises StateError with the JSON path of the offending field;
// configuration parsing fills defaults and raises ConfigError.

#include <json.hpp>

#include "bfosp/bernstein.hpp"
#include "bfosp/objectives.hpp"
#include "bfosp/optimizer.hpp"

namespace bfosp {

using Json = nlohmann::json;

Json to_json(const CurveSample& curve);
/// DomainError on a malformed object.
CurveSample curve_from_json(const Json& j);

Json to_json(const ShapePrior& prior);
Json to_json(const AcquisitionConfig& cfg);
Json to_json(const OptimizerConfig& cfg);
Json to_json(const DesignPoint& x);
Json to_json(const IterationRecord& rec);
Json to_json(const CampaignState& state);

/// Reads a configuration document; missing keys keep their defaults. The
/// result is validated.
OptimizerConfig config_from_json(const Json& j);

/// Strict reader for a persisted campaign document.
CampaignState state_from_json(const Json& j);

Json to_json(const ExternalRequest& req);
Json to_json(const ExternalResponse& resp);
ExternalResponse response_from_json(const Json& j);

SyntheticTarget target_from_json(const Json& j);
Json to_json(const SyntheticTarget& target);

}  // namespace bfosp
