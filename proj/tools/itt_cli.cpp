// Copyright 2026 The ITT Authors. All Rights Reserved.
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

// Command-line front end: train, eval, verify-es, bench-select, ttest, compare.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "itt/itt.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct ScoreColumn {
  std::vector<std::string> keys;
  itt::Vector values;
};

// First column is the pairing key, last column the value; one header row.
ScoreColumn read_score_csv(const std::string& path) {
  std::istringstream in(itt::read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw itt::Error("'" + path + "' is empty");
  ScoreColumn out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto first = line.find(',');
    const auto last = line.rfind(',');
    if (first == std::string::npos) throw itt::Error("'" + path + "' line " + std::to_string(lineno) + ": expected key,value");
    try {
      std::size_t used = 0;
      const std::string v = line.substr(last + 1);
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      out.keys.push_back(line.substr(0, first));
      out.values.push_back(x);
    } catch (const std::exception&) {
      throw itt::Error("'" + path + "' line " + std::to_string(lineno) + ": bad number");
    }
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    itt::write_text(out_path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit two-tower policies trained with evolution strategies"};
  app.require_subcommand(1);

  std::string train_config;
  auto* train = app.add_subcommand("train", "Train a policy on every configured seed");
  train->add_option("config", train_config, "INI config file")->required();

  std::string ckpt_path, eval_out;
  std::size_t episodes = 10;
  std::uint64_t eval_seed = 0;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("checkpoint", ckpt_path, "checkpoint.json")->required();
  eval->add_option("--episodes", episodes, "Number of episodes")->check(CLI::PositiveNumber);
  eval->add_option("--seed", eval_seed, "Evaluation seed");
  eval->add_option("--out", eval_out, "Write the summary here instead of stdout");

  std::size_t es_trials = 10000;
  std::uint64_t es_seed = 0;
  auto* verify = app.add_subcommand("verify-es", "Monte Carlo check of the ES estimators on quadratics");
  verify->add_option("--trials", es_trials, "Trials per fixture")->check(CLI::PositiveNumber);
  verify->add_option("--seed", es_seed, "Fixture seed");

  std::string bench_config, bench_out;
  itt::BenchOptions bench_opt;
  auto* bench = app.add_subcommand("bench-select", "Time brute-force ITT, ITT-SRP and IOT selection");
  bench->add_option("config", bench_config, "INI config file")->required();
  bench->add_option("--n-list", bench_opt.n_list, "Action set sizes")->required();
  bench->add_option("--trials", bench_opt.trials, "Queries per N")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_opt.seed, "Seed for weights, actions and states");
  bench->add_option("--budget", bench_opt.budget, "SRP candidate budget (default fast.srp_budget)");
  bench->add_option("--srp-m", bench_opt.srp_m, "SRP projections (default fast.srp_m)");
  bench->add_flag("--auto-m", bench_opt.auto_m, "Choose m = ceil(log2(N / budget)) + 1 per N");
  bench->add_option("--action-dim", bench_opt.action_dim, "Use a synthetic [-1, 1]^k action box");
  bench->add_option("--out", bench_out, "Write the table here instead of stdout");

  std::string csv_a, csv_b;
  auto* ttest = app.add_subcommand("ttest", "Paired t-test of two score files (key,...,value)");
  ttest->add_option("csv_a", csv_a)->required();
  ttest->add_option("csv_b", csv_b)->required();

  std::vector<std::string> compare_configs;
  std::string compare_dir = "runs/compare";
  auto* cmp = app.add_subcommand("compare", "Train several configs and compare final scores");
  cmp->add_option("configs", compare_configs, "INI config files")->required()->expected(2, -1);
  cmp->add_option("--out-dir", compare_dir, "Directory for summary.csv and pvalues.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train) {
      const itt::TrainConfig cfg = itt::load_config(train_config);
      const itt::TrainResult res = itt::train(cfg);
      std::cout << "seed,score\n";
      for (const auto& s : res.seeds) {
        std::cout << s.checkpoint.seed << "," << itt::format_real(s.final_eval.mean) << "\n";
      }
    } else if (*eval) {
      const itt::Checkpoint ckpt = itt::load_checkpoint(ckpt_path);
      emit(itt::eval_summary_json(itt::evaluate(ckpt, episodes, eval_seed)), eval_out);
    } else if (*verify) {
      std::cout << "D,M,fixture,at_mc,at_closed,fd_mc,fd_closed,fd_squared_entry_form\n";
      const std::pair<std::size_t, std::size_t> grid[] = {{4, 2}, {4, 4}, {16, 4}, {16, 16}};
      for (auto [d, m] : grid) {
        for (std::size_t f = 0; f < 5; ++f) {
          itt::Rng frng = itt::derive(es_seed, itt::tag("fixture"), d, m, f);
          const auto q = itt::QuadraticObjective::random(d, 1.0, frng);
          itt::Vector theta(d);
          for (double& v : theta) v = frng.normal();
          itt::Rng r1 = itt::derive(es_seed, itt::tag("at"), d, m, f);
          itt::Rng r2 = itt::derive(es_seed, itt::tag("fd"), d, m, f);
          const double at = itt::mc_mse(itt::EstimatorKind::kAntithetic, q, theta, 1.0, m, es_trials, r1);
          const double fd = itt::mc_mse(itt::EstimatorKind::kForwardDifference, q, theta, 1.0, m, es_trials, r2);
          std::cout << d << "," << m << "," << f << "," << itt::format_real(at) << ","
                    << itt::format_real(itt::at_mse_closed_form(q, theta, m)) << "," << itt::format_real(fd)
                    << "," << itt::format_real(itt::fd_mse_closed_form(q, theta, 1.0, m)) << ","
                    << itt::format_real(itt::fd_mse_squared_entry_form(q, theta, 1.0, m)) << "\n";
        }
      }
    } else if (*bench) {
      const itt::TrainConfig cfg = itt::load_config(bench_config);
      emit(itt::bench_csv(itt::bench_select(cfg, bench_opt)), bench_out);
    } else if (*ttest) {
      const ScoreColumn a = read_score_csv(csv_a);
      const ScoreColumn b = read_score_csv(csv_b);
      if (a.keys != b.keys) throw itt::Error("ttest: files list different keys");
      const itt::TTestResult r = itt::paired_t_test(a.values, b.values);
      std::cout << "t,p\n" << itt::format_real(r.t) << "," << itt::format_real(r.p) << "\n";
    } else if (*cmp) {
      std::vector<itt::TrainConfig> configs;
      for (const auto& path : compare_configs) configs.push_back(itt::load_config(path));
      const itt::CompareResult res = itt::compare(configs);
      const std::filesystem::path dir(compare_dir);
      itt::write_text(dir / "summary.csv", itt::compare_csv(res));
      itt::write_text(dir / "pvalues.csv", itt::pairwise_csv(res));
      std::cout << itt::compare_csv(res);
    }
  } catch (const itt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
