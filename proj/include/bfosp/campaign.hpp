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

// Durable ask/tell campaigns: token-checked tells, status and curve export,
// one JSON document per campaign written atomically under a lock file.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "bfosp/objectives.hpp"
#include "bfosp/optimizer.hpp"
#include "bfosp/serialization.hpp"

namespace bfosp {

struct TellResult {
  int accepted = 0;
  /// Re-sent (token, y) pairs that were already recorded with the same value.
  int duplicates = 0;
  /// Set when this tell resolved the last pending token of the batch.
  std::optional<IterationRecord> round;
};

/// Applies a set of (token, y) answers. Every answer is checked before any is
/// applied; on ProtocolError the state is untouched. A token already recorded
/// with the same y is acknowledged as a duplicate; a different y, an unknown
/// token or a token repeated within one call is rejected.
TellResult tell(CampaignState& state, std::span<const ExternalResponse> answers);

/// Summary document: iteration, order, counts, incumbent (user units) and
/// the rescale record for labelling curve axes.
Json status(const CampaignState& state);

/// Per-round audit records.
Json history(const CampaignState& state);

enum class CurveWhich { kIncumbent, kSuggestion };
CurveWhich curve_which_from_string(std::string_view name);

/// Curve in application units. kSuggestion picks pending[index]. NotFoundError
/// when there is no incumbent or no such suggestion.
CurveSample export_curve(const CampaignState& state, CurveWhich which, std::size_t grid_size,
                         std::size_t index = 0);

/// Exclusive advisory lock (flock) on "<path>.lock", held for the object's
/// lifetime.
class CampaignLock {
 public:
  explicit CampaignLock(const std::filesystem::path& campaign_file);
  ~CampaignLock();
  CampaignLock(const CampaignLock&) = delete;
  CampaignLock& operator=(const CampaignLock&) = delete;

 private:
  int fd_ = -1;
};

/// StateError on unreadable, unparsable or schema-invalid files.
CampaignState load_campaign(const std::filesystem::path& path);

/// Write to a temporary sibling, fsync, then rename over `path`.
void save_campaign(const std::filesystem::path& path, const CampaignState& state);

/// Lock, load, apply `fn`, save if `fn` returns true.
void update_campaign(const std::filesystem::path& path,
                     const std::function<bool(CampaignState&)>& fn);

/// Campaign ids are used as file names: [A-Za-z0-9_-], 1..64 chars.
bool valid_campaign_id(std::string_view id);

}  // namespace bfosp
