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

// HTTP JSON API over a directory of campaign files.
//
//   POST /campaigns                        {config}            -> 201 status
//   GET  /campaigns/{id}                                       -> status
//   GET  /campaigns/{id}/history                               -> [record]
//   POST /campaigns/{id}/ask               ?grid=101           -> {"requests": [...]}
//   POST /campaigns/{id}/tell              {token: y, ...}     -> status + tell result
//   GET  /campaigns/{id}/curve             ?which=&index=&grid= -> curve
//
// Errors are {"error": {"code", "message"}}: protocol 409, config/domain 400,
// not found 404, state/numerical 500.

#include <filesystem>
#include <memory>
#include <string>

namespace bfosp {

struct ServiceAddress {
  std::string host = "127.0.0.1";
  int port = 8700;

  /// Parses "host:port"; ConfigError on malformed input.
  static ServiceAddress parse(const std::string& text);
  /// BFOSP_ADDR if set, else the default 127.0.0.1:8700.
  static ServiceAddress from_env();
};

class CampaignService {
 public:
  explicit CampaignService(std::filesystem::path campaign_dir);
  ~CampaignService();
  CampaignService(const CampaignService&) = delete;
  CampaignService& operator=(const CampaignService&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const ServiceAddress& address);
  /// Blocks serving requests until stop().
  void listen();
  void stop();

  std::filesystem::path campaign_path(const std::string& id) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bfosp
