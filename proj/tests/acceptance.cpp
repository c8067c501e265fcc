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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bfosp/campaign.hpp"
#include "bfosp/error.hpp"
#include "oracles.hpp"

using namespace bfosp;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> random_coeffs(Rng& rng, int order, double lo, double hi) {
  std::vector<double> a(static_cast<std::size_t>(order) + 1);
  for (double& c : a) c = lo + (hi - lo) * uniform01(rng);
  return a;
}

void polynomial_identities(Outcome& out) {
  const auto t0 = Clock::now();
  Rng rng = make_rng(1001);
  const auto grid = oracle::uniform_grid(201);
  double worst_unity = 0.0, worst_fd = 0.0, worst_basis = 0.0, worst_elev = 0.0;
  long range_violations = 0;
  int polys = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = trial % 11;
    const auto a = random_coeffs(rng, n, -1.0, 2.0);
    const BernsteinPoly p(a);
    ++polys;
    const double lo = *std::min_element(a.begin(), a.end());
    const double hi = *std::max_element(a.begin(), a.end());
    const auto values = poly_eval(p, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      double s = 0.0;
      for (int v = 0; v <= n; ++v) s += basis_eval(n, v, grid[k]);
      worst_unity = std::max(worst_unity, std::abs(s - 1.0));
      if (values[k] < lo - 1e-12 || values[k] > hi + 1e-12) ++range_violations;
    }
    const BernsteinPoly e = elevate(p);
    for (double v : grid) worst_elev = std::max(worst_elev, std::abs(e(v) - p(v)));
    if (n == 0) continue;
    const BernsteinPoly dp = derivative(p);
    for (int k = 0; k < 20; ++k) {
      const double t = 1e-3 + (1.0 - 2e-3) * uniform01(rng);
      const double fd = oracle::central_difference([&](double s) { return p(s); }, t, 1e-6);
      worst_fd = std::max(worst_fd, std::abs(dp(t) - fd));
    }
    for (int v = 0; v <= n; ++v) {
      std::vector<double> unit(static_cast<std::size_t>(n) + 1, 0.0);
      unit[static_cast<std::size_t>(v)] = 1.0;
      const BernsteinPoly db = derivative(BernsteinPoly(unit));
      for (double t : oracle::uniform_grid(11)) {
        const double expect = n * (oracle::basis(n - 1, v - 1, t) - oracle::basis(n - 1, v, t));
        worst_basis = std::max(worst_basis, std::abs(db(t) - expect));
      }
    }
  }
  const double secs = seconds_since(t0);
  out.require(worst_unity <= 1e-12, "partition of unity");
  out.require(range_violations == 0, "range bound");
  out.require(worst_fd <= 1e-6, "derivative vs finite differences");
  out.require(worst_basis <= 1e-6, "basis derivative identity");
  out.require(worst_elev <= 1e-12, "elevation exactness");
  out.require(secs < 10.0, "runtime");
  out.detail << polys << " polynomials (orders 0-10), unity err " << worst_unity
             << ", range violations " << range_violations << ", fd err " << worst_fd
             << ", basis-identity err " << worst_basis << ", elevation err " << worst_elev
             << ", " << secs << " s";
}

void shape_constraints(Outcome& out) {
  const auto grid = oracle::uniform_grid(1001);
  struct Case {
    const char* name;
    ShapePrior prior;
  };
  const Case cases[] = {{"range", ShapePrior::range_only()},
                        {"increasing", ShapePrior::increasing()},
                        {"decreasing", ShapePrior::decreasing()},
                        {"unimodal", ShapePrior::unimodal()},
                        {"unimodal(l=3)", ShapePrior::unimodal(3)}};
  long violations = 0;
  int checked = 0;
  for (const Case& c : cases) {
    for (int order : {5, 10}) {
      for (const auto& a : sample_feasible(c.prior, order, 2000 + order, 1000)) {
        ++checked;
        const auto v = poly_eval(BernsteinPoly(a), grid);
        const auto d = poly_eval(derivative(BernsteinPoly(a)), grid);
        bool ok = is_feasible(c.prior, a) && in_unit_box(a);
        for (double x : v) ok = ok && x >= -1e-12 && x <= 1.0 + 1e-12;
        switch (c.prior.kind) {
          case ShapeKind::kIncreasing:
            for (std::size_t i = 1; i < v.size(); ++i) ok = ok && v[i] >= v[i - 1] - 1e-12;
            break;
          case ShapeKind::kDecreasing:
            for (std::size_t i = 1; i < v.size(); ++i) ok = ok && v[i] <= v[i - 1] + 1e-12;
            break;
          case ShapeKind::kUnimodal: {
            // Rising then falling: one sign change of the derivative at most.
            ok = ok && oracle::sign_changes(d, 1e-12) <= 1;
            const auto peak = std::max_element(v.begin(), v.end()) - v.begin();
            for (long i = 1; i <= peak; ++i) ok = ok && v[i] >= v[i - 1] - 1e-12;
            for (std::size_t i = static_cast<std::size_t>(peak) + 1; i < v.size(); ++i) {
              ok = ok && v[i] <= v[i - 1] + 1e-12;
            }
            break;
          }
          case ShapeKind::kRangeOnly:
            break;
        }
        violations += ok ? 0 : 1;
      }
    }
  }
  // Infeasible vectors must be rejected.
  int rejected = 0, infeasible = 0;
  auto expect_reject = [&](const ShapePrior& p, std::vector<double> a) {
    ++infeasible;
    rejected += is_feasible(p, a, 1e-12) ? 0 : 1;
  };
  expect_reject(ShapePrior::increasing(), {0.5, 0.2});
  expect_reject(ShapePrior::increasing(), {0.1, 0.4, 0.3, 0.9});
  expect_reject(ShapePrior::decreasing(), {0.9, 0.4, 0.5, 0.1});
  expect_reject(ShapePrior::unimodal(1), {0.1, 0.9, 0.5, 0.7});
  expect_reject(ShapePrior::unimodal(), {0.5, 0.1, 0.6, 0.2});
  expect_reject(ShapePrior::range_only(), {0.2, 1.01});
  expect_reject(ShapePrior::increasing(), {-0.01, 0.5});
  Rng rng = make_rng(2001);
  for (int i = 0; i < 1000; ++i) {
    auto a = draw_feasible(ShapePrior::increasing(), 6, rng);
    std::reverse(a.begin(), a.end());
    if (a.front() - a.back() > 1e-9) expect_reject(ShapePrior::increasing(), a);
  }
  out.require(violations == 0, "feasible samples produced a shape violation");
  out.require(rejected == infeasible, "an infeasible vector was accepted");
  out.detail << checked << " samples over 5 priors x orders {5,10}, " << violations
             << " violations at 1e-12 slack on a 1001-point grid; " << rejected << "/"
             << infeasible << " infeasible vectors rejected";
}

void gp_oracle(Outcome& out) {
  Rng rng = make_rng(3001);
  double worst_mean = 0.0, worst_var = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 20));
    const auto dim = static_cast<std::size_t>(uniform_int(rng, 1, 12));
    std::vector<std::vector<double>> xs(n, std::vector<double>(dim));
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : xs[i]) v = uniform01(rng);
      ys[i] = standard_normal(rng);
    }
    KernelParams p;
    p.signal_variance = 0.25 + 3.75 * uniform01(rng);
    p.noise_variance = std::pow(10.0, -6.0 + 4.0 * uniform01(rng));
    p.length_scales.resize(dim);
    for (double& l : p.length_scales) l = 0.2 + 0.8 * uniform01(rng);
    const auto gp = GpSurrogate::fit(xs, ys, p);
    for (int q = 0; q < 10; ++q) {
      std::vector<double> x(dim);
      for (double& v : x) v = uniform01(rng);
      const auto ref =
          oracle::gp_posterior(xs, ys, p.signal_variance, p.length_scales, p.noise_variance, x);
      const Prediction got = gp.predict(x);
      worst_mean = std::max(worst_mean, std::abs(got.mean - ref.mean));
      worst_var = std::max(worst_var, std::abs(got.variance - std::max(0.0, ref.variance)));
    }
  }
  out.require(worst_mean <= 1e-8 && worst_var <= 1e-8, "posterior differs from dense solve");
  out.detail << "100 datasets of 1-20 points, 1000 queries; max |mean err| " << worst_mean
             << ", max |var err| " << worst_var;
}

struct SurveyRow {
  std::vector<int> final_order;
  std::vector<double> final_utility;
  std::vector<int> hit_iteration;  // first round with incumbent >= 0.6; iterations+1 if never
};

SurveyRow survey(const SyntheticTarget& target, const ShapePrior& prior, int seeds, int iters) {
  SurveyRow row;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto cfg = synthetic_config(prior, iters, static_cast<std::uint64_t>(seed));
    const SyntheticRun run = run_synthetic(target, cfg, iters);
    row.final_order.push_back(run.state.current_order);
    row.final_utility.push_back(run.incumbent_trace.back());
    int hit = iters + 1;
    for (std::size_t i = 0; i < run.incumbent_trace.size(); ++i) {
      if (run.incumbent_trace[i] >= 0.6) {
        hit = static_cast<int>(i) + 1;
        break;
      }
    }
    row.hit_iteration.push_back(hit);
  }
  return row;
}

double median(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void synthetic_benchmark(Outcome& out) {
  const auto t0 = Clock::now();
  constexpr int kSeeds = 20, kIters = 40;
  const SyntheticTarget dec = SyntheticTarget::decreasing();
  const SyntheticTarget uni = SyntheticTarget::unimodal();
  const SurveyRow dec_prior = survey(dec, ShapePrior::decreasing(), kSeeds, kIters);
  const SurveyRow dec_range = survey(dec, ShapePrior::range_only(), kSeeds, kIters);
  const SurveyRow uni_prior = survey(uni, ShapePrior::unimodal(), kSeeds, kIters);
  const SurveyRow uni_range = survey(uni, ShapePrior::range_only(), kSeeds, kIters);
  const double secs = seconds_since(t0);

  auto grown = [](const SurveyRow& r) {
    return std::count_if(r.final_order.begin(), r.final_order.end(), [](int o) { return o > 5; });
  };
  const long dec_good = std::count_if(dec_prior.final_utility.begin(), dec_prior.final_utility.end(),
                                      [](double u) { return u >= 0.8; });
  const double med_dec_prior = median(dec_prior.hit_iteration);
  const double med_dec_range = median(dec_range.hit_iteration);
  const double med_uni_prior = median(uni_prior.hit_iteration);
  const double med_uni_range = median(uni_range.hit_iteration);

  out.require(grown(dec_prior) >= 18 && grown(uni_prior) >= 18, "(a) order growth");
  out.require(dec_good >= 15, "(b) decreasing utility");
  out.require(med_dec_prior <= med_dec_range && med_uni_prior <= med_uni_range,
              "(c) prior speed-up");
  out.require(secs < 300.0, "runtime");
  out.detail << "(a) order > 5 in " << grown(dec_prior) << "/20 decreasing, " << grown(uni_prior)
             << "/20 unimodal; (b) utility >= 0.8 in " << dec_good
             << "/20 decreasing; (c) median rounds to 0.6 prior/range: decreasing "
             << med_dec_prior << "/" << med_dec_range << ", unimodal " << med_uni_prior << "/"
             << med_uni_range << "; " << secs << " s";
}

CampaignState state_for(int start, int max, int period) {
  OptimizerConfig c;
  c.start_order = start;
  c.max_order = max;
  c.fixed_increment_period = period;
  c.acquisition.candidate_count = 100;
  return initial_state(c, "trigger");
}

IterationRecord round_with(CampaignState& s, const std::vector<double>& alpha, double y) {
  ask(s);
  s.pending.at(0).point.alpha = alpha;
  const std::vector<double> ys{y};
  s = step(std::move(s), ys).state;
  return s.log.back();
}

void trigger_behaviour(Outcome& out) {
  const std::vector<double> jump{0.0, 0.96, 0.97, 1.0};
  const std::vector<double> flat{0.4, 0.45, 0.5, 0.55};

  CampaignState d = state_for(3, 10, 100);
  const IterationRecord rd = round_with(d, jump, 1.0);
  out.require(rd.derivative_fired && !rd.schedule_fired && rd.trigger == Trigger::kDerivative &&
                  rd.order_before == 3 && rd.order_after == 4 && !rd.suppressed &&
                  d.observations[0].obs.point.alpha.size() == 5,
              "derivative elevation");

  CampaignState s = state_for(3, 10, 2);
  const IterationRecord r1 = round_with(s, flat, 0.5);
  const IterationRecord r2 = round_with(s, flat, 0.6);
  out.require(r1.trigger == Trigger::kNone && r1.order_after == 3 && r2.schedule_fired &&
                  !r2.derivative_fired && r2.trigger == Trigger::kSchedule && r2.order_after == 4,
              "scheduled elevation");

  CampaignState m = state_for(3, 3, 1);
  const IterationRecord rm = round_with(m, jump, 1.0);
  out.require(rm.derivative_fired && rm.schedule_fired && rm.suppressed && rm.order_after == 3 &&
                  m.current_order == 3 && to_json(rm).at("suppressed") == true,
              "suppression at max order");
  out.detail << "d = " << rd.max_difference << " fires derivative (3 -> 4); m = 2 = period fires "
             << "schedule (3 -> 4); at max order both fire, order stays 3, logged suppressed";
}

void batch_pe(Outcome& out) {
  int batches = 0;
  double worst_post = 0.0;
  for (const ShapePrior& prior : {ShapePrior::increasing(), ShapePrior::unimodal(),
                                  ShapePrior::range_only()}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      SearchSpace space{5, prior, InputSpace{{{0.0, 1.0}}}};
      Rng rng = make_rng(seed, 4001);
      std::vector<std::vector<double>> xs;
      std::vector<double> ys;
      for (int i = 0; i < 12; ++i) {
        xs.push_back(space.draw_features(rng));
        ys.push_back(std::sin(3.0 * xs.back()[2]) + xs.back()[6]);
      }
      const auto gp = GpSurrogate::fit(xs, ys, KernelParams::isotropic(space.dim(), 0.3, 1.0, 1e-6));
      AcquisitionConfig cfg;
      cfg.batch_size = 6;
      cfg.rng_seed = seed;
      const auto batch = suggest_batch(&gp, space, cfg, 13);
      ++batches;
      out.require(batch.size() == 6, "batch size");
      std::vector<std::vector<double>> chosen;
      for (std::size_t j = 0; j < batch.size(); ++j) {
        out.require(space.is_feasible(batch[j].point, 1e-12), "feasibility");
        for (const auto& c : chosen) {
          double d = 0.0;
          for (std::size_t k = 0; k < c.size(); ++k) d = std::max(d, std::abs(c[k] - batch[j].features[k]));
          out.require(d >= AcquisitionConfig::kMinSeparation, "pairwise distinct");
        }
        if (j > 0) {
          const double v = gp.augmented(chosen).predict(batch[j].features).variance;
          out.require(batch[j].value >= batch[j].pool_best, "variance dominance over pool");
          out.require(std::abs(v - batch[j].value) <= 1e-12, "reported variance");
        }
        chosen.push_back(batch[j].features);
      }
      const auto all = gp.augmented(chosen);
      for (const auto& c : chosen) worst_post = std::max(worst_post, all.predict(c).variance);
      out.require(worst_post <= gp.params().noise_variance + 1e-9, "post-augmentation variance");
    }
  }
  out.detail << batches << " batches of 6 (3 priors x 5 seeds): feasible, distinct, points 2-6 "
             << "dominate their pools; max variance at chosen points after augmentation "
             << worst_post << " (noise 1e-6)";
}

void durability(Outcome& out) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bfosp-acceptance";
  fs::create_directories(dir);
  int identical = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    OptimizerConfig c;
    c.prior = seed % 2 == 0 ? ShapePrior::increasing() : ShapePrior::unimodal();
    c.aux_bounds = {{5.0, 15.0}};
    c.fixed_increment_period = 3;
    c.acquisition.batch_size = static_cast<int>(seed % 3) + 1;
    c.acquisition.candidate_count = 300;
    c.acquisition.rng_seed = seed;
    CampaignState live = initial_state(c, "d" + std::to_string(seed));
    const Objective f = make_objective(SyntheticTarget::decreasing());
    live = run_closed_loop(std::move(live), f, 3 + static_cast<int>(seed % 4));
    const fs::path p = dir / (live.campaign_id + ".json");
    save_campaign(p, live);
    CampaignState revived = load_campaign(p);
    const bool same = ask(revived) == ask(live) && revived == live;
    identical += same ? 1 : 0;
  }
  out.require(identical == 20, "replayed ask differs");

  // Token idempotency.
  OptimizerConfig c;
  c.acquisition.batch_size = 2;
  c.acquisition.candidate_count = 100;
  CampaignState s = initial_state(c, "tokens");
  ask(s);
  const std::vector<ExternalResponse> a{{s.pending[0].token, 0.3}};
  const TellResult first = tell(s, a);
  const CampaignState snapshot = s;
  const TellResult again = tell(s, a);
  bool stale_rejected = false;
  try {
    const std::vector<ExternalResponse> changed{{s.pending[0].token, 0.4}};
    tell(s, changed);
  } catch (const ProtocolError&) {
    stale_rejected = true;
  }
  out.require(first.accepted == 1 && again.accepted == 0 && again.duplicates == 1 && s == snapshot &&
                  stale_rejected,
              "token idempotency");
  fs::remove_all(dir);
  out.detail << identical << "/20 seeds replay the identical next ask from disk; re-sent token "
             << "acknowledged as duplicate without state change, conflicting value rejected";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const Criterion criteria[] = {
      {"polynomial identities", polynomial_identities},
      {"shape constraints", shape_constraints},
      {"gp oracle equivalence", gp_oracle},
      {"synthetic benchmark", synthetic_benchmark},
      {"order trigger behaviour", trigger_behaviour},
      {"batch ucb-pe", batch_pe},
      {"campaign durability", durability},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "exception: " << e.what();
    }
    failures += out.pass ? 0 : 1;
    std::printf("%s  %-24s %s\n", out.pass ? "PASS" : "FAIL", c.name, out.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
