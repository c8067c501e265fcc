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

#include "bfosp/campaign.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "bfosp/error.hpp"

namespace bfosp {

TellResult tell(CampaignState& state, std::span<const ExternalResponse> answers) {
  if (answers.empty()) throw ProtocolError("tell needs at least one token");
  const bool negate = state.config.negate;
  std::map<std::string, double> fresh;
  TellResult result;
  for (const auto& a : answers) {
    if (!std::isfinite(a.y)) throw ProtocolError("value for token '" + a.token + "' is not finite");
    const double stored = negate ? -a.y : a.y;
    if (fresh.contains(a.token)) {
      throw ProtocolError("token '" + a.token + "' appears twice in one tell");
    }
    auto p = std::find_if(state.pending.begin(), state.pending.end(),
                          [&](const PendingSuggestion& s) { return s.token == a.token; });
    if (p != state.pending.end() && !p->value) {
      fresh.emplace(a.token, stored);
      continue;
    }
    auto o = std::find_if(state.observations.begin(), state.observations.end(),
                          [&](const StoredObservation& s) { return s.token == a.token; });
    if (o == state.observations.end()) {
      throw ProtocolError("unknown token '" + a.token + "'");
    }
    if (o->obs.value != stored) {
      throw ProtocolError("token '" + a.token + "' is stale: already told with y = " +
                          std::to_string(negate ? -o->obs.value : o->obs.value));
    }
    ++result.duplicates;
  }

  // Apply in batch order so observation order does not depend on the caller.
  for (const auto& p : std::vector<PendingSuggestion>(state.pending)) {
    auto it = fresh.find(p.token);
    if (it == fresh.end()) continue;
    record(state, p.token, it->second);
    ++result.accepted;
  }
  const bool complete =
      !state.pending.empty() &&
      std::all_of(state.pending.begin(), state.pending.end(),
                  [](const PendingSuggestion& p) { return p.value.has_value(); });
  if (complete && result.accepted > 0) result.round = complete_round(state);
  return result;
}

Json status(const CampaignState& state) {
  const double sign = state.config.negate ? -1.0 : 1.0;
  int unresolved = 0;
  Json tokens = Json::array();
  for (const auto& p : state.pending) {
    if (!p.value) {
      ++unresolved;
      tokens.push_back(p.token);
    }
  }
  Json j{{"campaign_id", state.campaign_id},
         {"iteration", state.iteration},
         {"max_iterations", state.config.max_iterations},
         {"current_order", state.current_order},
         {"max_order", state.config.max_order},
         {"prior", to_json(state.config.prior)},
         {"batch_size", state.config.acquisition.batch_size},
         {"observations", state.observations.size()},
         {"pending", unresolved},
         {"pending_tokens", tokens},
         {"finished", state.finished()},
         {"negate", state.config.negate}};
  const RescaleRecord& r = state.config.rescale;
  j["rescale"] = {{"t_min", r.t_min}, {"t_max", r.t_max}, {"y_min", r.y_min}, {"y_max", r.y_max}};
  if (state.observations.empty()) {
    j["incumbent"] = nullptr;
  } else {
    const std::vector<Observation> data = state.data();
    const Observation& best = incumbent(data);
    j["incumbent"] = {{"value", sign * best.value},
                      {"iteration", best.iteration},
                      {"point", to_json(best.point)}};
  }
  int increments = 0;
  for (const auto& r : state.log) increments += r.order_after > r.order_before ? 1 : 0;
  j["order_increments"] = increments;
  return j;
}

Json history(const CampaignState& state) {
  Json out = Json::array();
  for (const auto& r : state.log) out.push_back(to_json(r));
  return out;
}

CurveWhich curve_which_from_string(std::string_view name) {
  if (name == "incumbent") return CurveWhich::kIncumbent;
  if (name == "suggestion") return CurveWhich::kSuggestion;
  throw ConfigError("curve selector must be 'incumbent' or 'suggestion'");
}

CurveSample export_curve(const CampaignState& state, CurveWhich which, std::size_t grid_size,
                         std::size_t index) {
  if (which == CurveWhich::kIncumbent) {
    const std::vector<Observation> data = state.data();
    const Observation& best = incumbent(data);
    return sample_curve(BernsteinPoly(best.point.alpha), grid_size, state.config.rescale);
  }
  if (index >= state.pending.size()) {
    throw NotFoundError("no pending suggestion at index " + std::to_string(index));
  }
  return sample_curve(BernsteinPoly(state.pending[index].point.alpha), grid_size,
                      state.config.rescale);
}

CampaignLock::CampaignLock(const std::filesystem::path& campaign_file) {
  const std::string lock_path = campaign_file.string() + ".lock";
  fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) throw StateError("cannot open lock file " + lock_path + ": " + std::strerror(errno));
  while (::flock(fd_, LOCK_EX) != 0) {
    if (errno != EINTR) {
      ::close(fd_);
      throw StateError("cannot lock " + lock_path + ": " + std::strerror(errno));
    }
  }
}

CampaignLock::~CampaignLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

CampaignState load_campaign(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StateError("cannot read campaign file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw StateError("campaign file " + path.string() + " is not valid JSON: " + e.what());
  }
  try {
    return state_from_json(j);
  } catch (const StateError& e) {
    throw StateError(path.string() + ": " + e.what());
  }
}

void save_campaign(const std::filesystem::path& path, const CampaignState& state) {
  const std::string text = to_json(state).dump(2) + "\n";
  const std::filesystem::path tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) throw StateError("cannot write " + tmp.string() + ": " + std::strerror(errno));
  std::size_t off = 0;
  while (off < text.size()) {
    const ssize_t n = ::write(fd, text.data() + off, text.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      throw StateError("write to " + tmp.string() + " failed: " + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    throw StateError("cannot flush " + tmp.string() + ": " + std::strerror(errno));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw StateError("cannot replace " + path.string() + ": " + ec.message());
}

void update_campaign(const std::filesystem::path& path,
                     const std::function<bool(CampaignState&)>& fn) {
  CampaignLock lock(path);
  CampaignState state = load_campaign(path);
  if (fn(state)) save_campaign(path, state);
}

bool valid_campaign_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-';
  });
}

}  // namespace bfosp
