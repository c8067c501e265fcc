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

// bfosp: command-line front end for functional Bayesian optimisation campaigns.

#include <CLI11.hpp>

#include <csignal>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bfosp/campaign.hpp"
#include "bfosp/error.hpp"
#include "bfosp/objectives.hpp"
#include "bfosp/service.hpp"

namespace {

using bfosp::Json;

bfosp::Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bfosp::ConfigError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw bfosp::ConfigError(path + " is not valid JSON: " + e.what());
  }
}

void require_campaign(const std::string& path) {
  if (path.empty()) throw bfosp::ConfigError("--campaign <path> is required");
}

bfosp::CampaignService* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional Bayesian optimisation with Bernstein shape priors"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string campaign;
  app.add_option("--campaign", campaign, "Campaign state file (JSON)");

  std::string config_path, campaign_id;
  auto* init = app.add_subcommand("init", "Create a campaign from a config file");
  init->add_option("--config", config_path, "Config JSON")->required();
  init->add_option("--id", campaign_id, "Campaign id (default: file stem)");

  std::size_t grid = 101;
  auto* ask_cmd = app.add_subcommand("ask", "Print the pending batch, generating one if needed");
  ask_cmd->add_option("--grid", grid, "Curve grid size");

  std::vector<std::string> tokens;
  std::vector<double> ys;
  auto* tell_cmd = app.add_subcommand("tell", "Report outcomes for pending tokens");
  tell_cmd->add_option("--token", tokens, "Suggestion token (repeatable)")->required();
  tell_cmd->add_option("--y", ys, "Observed value, paired with --token by position")->required();

  app.add_subcommand("status", "Print the campaign summary");
  app.add_subcommand("log", "Print the run log as JSON lines");

  std::string what = "incumbent";
  std::size_t index = 0;
  auto* export_cmd = app.add_subcommand("export", "Export a curve in application units");
  export_cmd->add_option("--what", what, "incumbent | suggestion")
      ->check(CLI::IsMember({"incumbent", "suggestion"}));
  export_cmd->add_option("--grid", grid, "Curve grid size");
  export_cmd->add_option("--index", index, "Suggestion index for --what suggestion");

  std::string shape = "decreasing", prior_name = "auto", target_path;
  int iters = 40;
  std::uint64_t seed = 0;
  auto* synth = app.add_subcommand("run-synthetic", "Closed-loop synthetic benchmark");
  synth->add_option("--shape", shape, "decreasing | unimodal")
      ->check(CLI::IsMember({"decreasing", "unimodal"}));
  synth->add_option("--iters", iters, "Sequential iterations");
  synth->add_option("--seed", seed, "RNG seed");
  synth->add_option("--prior", prior_name, "auto (matches shape) | range | increasing | decreasing | unimodal");
  synth->add_option("--target", target_path, "Target JSON overriding the built-in vector");

  std::string dir = "campaigns", addr;
  auto* serve = app.add_subcommand("serve", "Run the HTTP JSON API");
  serve->add_option("--dir", dir, "Directory holding campaign files");
  serve->add_option("--addr", addr, "host:port (default $BFOSP_ADDR or 127.0.0.1:8700)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (init->parsed()) {
      require_campaign(campaign);
      const Json cfg_json = read_json_file(config_path);
      std::string id = campaign_id;
      if (id.empty() && cfg_json.contains("campaign_id") && cfg_json["campaign_id"].is_string()) {
        id = cfg_json["campaign_id"].get<std::string>();
      }
      if (id.empty()) id = std::filesystem::path(campaign).stem().string();
      const bfosp::CampaignState state = bfosp::initial_state(bfosp::config_from_json(cfg_json), id);
      {
        bfosp::CampaignLock lock(campaign);
        if (std::filesystem::exists(campaign)) {
          throw bfosp::ConfigError(campaign + " already exists");
        }
        bfosp::save_campaign(campaign, state);
      }
      std::cout << bfosp::status(state).dump(2) << "\n";
    } else if (ask_cmd->parsed()) {
      require_campaign(campaign);
      Json out;
      bfosp::update_campaign(campaign, [&](bfosp::CampaignState& state) {
        const auto before = state.ask_counter;
        bfosp::ask(state);
        Json reqs = Json::array();
        for (const auto& r : bfosp::external_requests(state, grid)) reqs.push_back(bfosp::to_json(r));
        out = {{"requests", reqs}, {"finished", state.finished()}};
        return state.ask_counter != before;
      });
      std::cout << out.dump(2) << "\n";
    } else if (tell_cmd->parsed()) {
      require_campaign(campaign);
      if (tokens.size() != ys.size()) {
        throw bfosp::ProtocolError("each --token needs exactly one --y");
      }
      std::vector<bfosp::ExternalResponse> answers;
      for (std::size_t i = 0; i < tokens.size(); ++i) answers.push_back({tokens[i], ys[i]});
      Json out;
      bfosp::update_campaign(campaign, [&](bfosp::CampaignState& state) {
        const bfosp::TellResult r = bfosp::tell(state, answers);
        out = bfosp::status(state);
        out["accepted"] = r.accepted;
        out["duplicates"] = r.duplicates;
        out["round"] = r.round ? bfosp::to_json(*r.round) : Json(nullptr);
        return r.accepted > 0;
      });
      std::cout << out.dump(2) << "\n";
    } else if (app.got_subcommand("status")) {
      require_campaign(campaign);
      bfosp::CampaignLock lock(campaign);
      std::cout << bfosp::status(bfosp::load_campaign(campaign)).dump(2) << "\n";
    } else if (app.got_subcommand("log")) {
      require_campaign(campaign);
      bfosp::CampaignLock lock(campaign);
      for (const auto& rec : bfosp::load_campaign(campaign).log) {
        std::cout << bfosp::to_json(rec).dump() << "\n";
      }
    } else if (export_cmd->parsed()) {
      require_campaign(campaign);
      bfosp::CampaignLock lock(campaign);
      const auto state = bfosp::load_campaign(campaign);
      std::cout << bfosp::to_json(bfosp::export_curve(state, bfosp::curve_which_from_string(what),
                                                      grid, index))
                       .dump()
                << "\n";
    } else if (synth->parsed()) {
      const bfosp::TargetShape target_shape = bfosp::target_shape_from_string(shape);
      bfosp::SyntheticTarget target = target_path.empty()
                                          ? bfosp::SyntheticTarget::preset(target_shape)
                                          : bfosp::target_from_json(read_json_file(target_path));
      bfosp::ShapePrior prior;
      if (prior_name == "auto") {
        prior = target.shape == bfosp::TargetShape::kDecreasing ? bfosp::ShapePrior::decreasing()
                                                                : bfosp::ShapePrior::unimodal();
      } else {
        prior.kind = bfosp::shape_kind_from_string(prior_name);
      }
      const auto cfg = bfosp::synthetic_config(prior, iters, seed);
      const bfosp::SyntheticRun run = bfosp::run_synthetic(target, cfg, iters);
      for (const auto& rec : run.state.log) std::cout << bfosp::to_json(rec).dump() << "\n";
      std::cerr << "final order " << run.state.current_order << ", incumbent utility "
                << (run.incumbent_trace.empty() ? 0.0 : run.incumbent_trace.back()) << "\n";
      if (!campaign.empty()) bfosp::save_campaign(campaign, run.state);
    } else if (serve->parsed()) {
      const bfosp::ServiceAddress address =
          addr.empty() ? bfosp::ServiceAddress::from_env() : bfosp::ServiceAddress::parse(addr);
      bfosp::CampaignService service(dir);
      const int port = service.bind(address);
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "serving campaigns from " << dir << " on " << address.host << ":" << port << "\n";
      service.listen();
      g_service = nullptr;
    }
  } catch (const bfosp::Error& e) {
    std::cout << Json{{"error", {{"code", e.code()}, {"message", e.what()}}}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
