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

#include "bfosp/service.hpp"

// Eigen (via campaign.hpp) must precede httplib: <resolv.h> defines `_res`.
#include "bfosp/campaign.hpp"
#include "bfosp/error.hpp"

#include <httplib.h>

#include <cstdlib>
#include <map>
#include <mutex>

namespace bfosp {

ServiceAddress ServiceAddress::parse(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
    throw ConfigError("address must look like host:port, got '" + text + "'");
  }
  ServiceAddress a;
  a.host = text.substr(0, colon);
  try {
    std::size_t used = 0;
    a.port = std::stoi(text.substr(colon + 1), &used);
    if (used != text.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("invalid port in address '" + text + "'");
  }
  if (a.port < 0 || a.port > 65535) throw ConfigError("port out of range in '" + text + "'");
  return a;
}

ServiceAddress ServiceAddress::from_env() {
  if (const char* env = std::getenv("BFOSP_ADDR"); env != nullptr && *env != '\0') {
    return parse(env);
  }
  return {};
}

namespace {

constexpr const char* kJson = "application/json";
constexpr std::size_t kDefaultGrid = 101;

void send_error(httplib::Response& res, int http_status, const char* code,
                const std::string& message) {
  res.status = http_status;
  res.set_content(Json{{"error", {{"code", code}, {"message", message}}}}.dump(), kJson);
}

void send(httplib::Response& res, const Json& body, int http_status = 200) {
  res.status = http_status;
  res.set_content(body.dump(), kJson);
}

std::size_t size_param(const httplib::Request& req, const char* key, std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string v = req.get_param_value(key);
  try {
    std::size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used != v.size() || n < 0) throw std::invalid_argument("bad");
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw ConfigError(std::string("query parameter '") + key + "' must be a non-negative integer");
  }
}

Json parse_body(const httplib::Request& req) {
  try {
    return req.body.empty() ? Json::object() : Json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("request body is not valid JSON: ") + e.what());
  }
}

}  // namespace

struct CampaignService::Impl {
  std::filesystem::path dir;
  httplib::Server server;
  std::mutex locks_guard;
  std::map<std::string, std::unique_ptr<std::mutex>> locks;

  // Serialises writers of one campaign inside this process; the file lock
  // covers other processes.
  std::mutex& campaign_mutex(const std::string& id) {
    std::lock_guard<std::mutex> g(locks_guard);
    auto& m = locks[id];
    if (!m) m = std::make_unique<std::mutex>();
    return *m;
  }

  std::filesystem::path path_for(const std::string& id) const { return dir / (id + ".json"); }

  std::filesystem::path existing(const std::string& id) const {
    auto p = path_for(id);
    if (!std::filesystem::exists(p)) throw NotFoundError("no campaign '" + id + "'");
    return p;
  }

  CampaignState snapshot(const std::string& id) {
    const auto p = existing(id);
    CampaignLock lock(p);
    return load_campaign(p);
  }

  template <typename Fn>
  void guarded(httplib::Response& res, Fn&& fn) {
    try {
      fn();
    } catch (const ProtocolError& e) {
      send_error(res, 409, e.code(), e.what());
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.code(), e.what());
    } catch (const ConfigError& e) {
      send_error(res, 400, e.code(), e.what());
    } catch (const DomainError& e) {
      send_error(res, 400, e.code(), e.what());
    } catch (const Error& e) {
      send_error(res, 500, e.code(), e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  }

  void routes() {
    const std::string id_re = "([A-Za-z0-9_-]{1,64})";

    server.Post("/campaigns", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const Json body = parse_body(req);
        std::string id;
        if (auto it = body.find("campaign_id"); it != body.end() && it->is_string()) {
          id = it->get<std::string>();
        } else {
          id = "c" + std::to_string(std::hash<std::string>{}(body.dump()) % 1000000007ULL);
        }
        if (!valid_campaign_id(id)) throw ConfigError("invalid campaign_id '" + id + "'");
        const Json& cfg_json = body.contains("config") ? body["config"] : body;
        CampaignState state = initial_state(config_from_json(cfg_json), id);
        std::lock_guard<std::mutex> g(campaign_mutex(id));
        const auto p = path_for(id);
        CampaignLock lock(p);
        if (std::filesystem::exists(p)) throw ProtocolError("campaign '" + id + "' already exists");
        save_campaign(p, state);
        send(res, status(state), 201);
      });
    });

    server.Get("/campaigns/" + id_re, [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { send(res, status(snapshot(req.matches[1]))); });
    });

    server.Get("/campaigns/" + id_re + "/history",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] { send(res, history(snapshot(req.matches[1]))); });
               });

    server.Post("/campaigns/" + id_re + "/ask",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    const std::string id = req.matches[1];
                    const std::size_t grid = size_param(req, "grid", kDefaultGrid);
                    std::lock_guard<std::mutex> g(campaign_mutex(id));
                    Json out;
                    update_campaign(existing(id), [&](CampaignState& state) {
                      const auto before = state.ask_counter;
                      ask(state);
                      Json reqs = Json::array();
                      for (const auto& r : external_requests(state, grid)) reqs.push_back(to_json(r));
                      out = {{"requests", reqs}, {"finished", state.finished()}};
                      return state.ask_counter != before;
                    });
                    send(res, out);
                  });
                });

    server.Post("/campaigns/" + id_re + "/tell",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    const std::string id = req.matches[1];
                    const Json body = parse_body(req);
                    if (!body.is_object() || body.empty()) {
                      throw ProtocolError("tell body must be a non-empty {token: y} object");
                    }
                    std::vector<ExternalResponse> answers;
                    for (const auto& [token, y] : body.items()) {
                      if (!y.is_number()) throw ProtocolError("value for '" + token + "' is not a number");
                      answers.push_back({token, y.get<double>()});
                    }
                    std::lock_guard<std::mutex> g(campaign_mutex(id));
                    Json out;
                    update_campaign(existing(id), [&](CampaignState& state) {
                      const TellResult r = tell(state, answers);
                      out = status(state);
                      out["accepted"] = r.accepted;
                      out["duplicates"] = r.duplicates;
                      out["round"] = r.round ? to_json(*r.round) : Json(nullptr);
                      return r.accepted > 0;
                    });
                    send(res, out);
                  });
                });

    server.Get("/campaigns/" + id_re + "/curve",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   const CampaignState state = snapshot(req.matches[1]);
                   const CurveWhich which = curve_which_from_string(
                       req.has_param("which") ? req.get_param_value("which") : "incumbent");
                   const std::size_t grid = size_param(req, "grid", kDefaultGrid);
                   const std::size_t index = size_param(req, "index", 0);
                   send(res, to_json(export_curve(state, which, grid, index)));
                 });
               });

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        send_error(res, res.status, res.status == 404 ? "not_found" : "http_error",
                   "no route for this request");
      }
    });
  }
};

CampaignService::CampaignService(std::filesystem::path campaign_dir)
    : impl_(std::make_unique<Impl>()) {
  impl_->dir = std::move(campaign_dir);
  std::filesystem::create_directories(impl_->dir);
  impl_->routes();
}

CampaignService::~CampaignService() { stop(); }

int CampaignService::bind(const ServiceAddress& address) {
  if (address.port == 0) {
    const int port = impl_->server.bind_to_any_port(address.host);
    if (port < 0) throw ConfigError("cannot bind " + address.host);
    return port;
  }
  if (!impl_->server.bind_to_port(address.host, address.port)) {
    throw ConfigError("cannot bind " + address.host + ":" + std::to_string(address.port));
  }
  return address.port;
}

void CampaignService::listen() { impl_->server.listen_after_bind(); }

void CampaignService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

std::filesystem::path CampaignService::campaign_path(const std::string& id) const {
  return impl_->path_for(id);
}

}  // namespace bfosp
