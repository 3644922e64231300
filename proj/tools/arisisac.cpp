// SPDX-License-Identifier: Apache-2.0
//
// arisisac: aerial-RIS integrated sensing and communication simulator
// Copyright (C) 2026 The arisisac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Command-line experiment runner.
//
//   arisisac train   --config desk.toml --scheme proposed --seed 3 --out runs/p3 --checkpoint runs/p3/agent.txt
//   arisisac eval    --config desk.toml --checkpoint runs/p3/agent.txt --out runs/p3-eval
//   arisisac compare --config desk.toml --seeds 5 --out runs/cmp
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include "arisisac/arisisac.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

namespace
{
    struct CommonOptions
    {
        std::string config;
        std::string scheme;
        std::string seed;
        int episodes = 0;
        std::string out = "out";
        std::string checkpoint;
        std::vector<std::string> sets;
    };

    void add_common(CLI::App *cmd, CommonOptions &o)
    {
        cmd->add_option("--config", o.config, "Configuration file (key = value)");
        cmd->add_option("--scheme", o.scheme, "proposed | fixed-ris | no-nsp");
        cmd->add_option("--seed", o.seed, "Master seed");
        cmd->add_option("--episodes", o.episodes, "Training episodes (E_max); evaluation episodes for eval");
        cmd->add_option("--out", o.out, "Output directory");
        cmd->add_option("--set", o.sets, "Override, key=value (repeatable)");
    }

    arisisac::ExperimentConfig resolve(const CommonOptions &o, bool episodes_are_training)
    {
        arisisac::Overrides ov;
        for (const auto &s : o.sets)
            ov.push_back(arisisac::parse_override(s));
        if (!o.scheme.empty())
            ov.emplace_back("scheme", o.scheme);
        if (!o.seed.empty())
            ov.emplace_back("seed", o.seed);
        if (episodes_are_training && o.episodes > 0)
            ov.emplace_back("E_max", std::to_string(o.episodes));
        return arisisac::load_config(o.config, ov);
    }

    void progress(int episode, double reward, int total)
    {
        const int step = std::max(1, total / 10);
        if ((episode + 1) % step == 0 || episode + 1 == total)
            std::fprintf(stderr, "episode %d/%d  reward %.6g\n", episode + 1, total, reward);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"ARIS-assisted ISAC simulator and DDPG trajectory learner"};
    app.require_subcommand(1);

    CommonOptions train_opt, eval_opt, cmp_opt;
    int seeds = 5;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::string> schemes{"proposed", "fixed-ris", "no-nsp"};
    bool quiet = false;

    auto *train_cmd = app.add_subcommand("train", "Train an agent, then evaluate the greedy policy");
    add_common(train_cmd, train_opt);
    train_cmd->add_option("--checkpoint", train_opt.checkpoint, "Write the trained networks here");
    train_cmd->add_flag("--quiet", quiet, "No progress output");

    auto *eval_cmd = app.add_subcommand("eval", "Evaluate a saved agent");
    add_common(eval_cmd, eval_opt);
    eval_cmd->add_option("--checkpoint", eval_opt.checkpoint, "Trained networks")->required();

    auto *cmp_cmd = app.add_subcommand("compare", "Train every scheme over several seeds and summarize");
    add_common(cmp_cmd, cmp_opt);
    cmp_cmd->add_option("--seeds", seeds, "Number of seeds, starting at the master seed")->check(CLI::PositiveNumber);
    cmp_cmd->add_option("--threads", threads, "Concurrent runs")->check(CLI::PositiveNumber);
    cmp_cmd->add_option("--schemes", schemes, "Schemes to compare");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try
    {
        namespace fs = std::filesystem;
        if (train_cmd->parsed())
        {
            const auto cfg = resolve(train_opt, true);
            const int total = cfg.train.episodes;
            arisisac::DdpgAgent agent(cfg.train, cfg.v_max, cfg.w_max, cfg.seed);
            const auto res = arisisac::run_experiment(cfg, &agent, [&](int e, double r) {
                if (!quiet)
                    progress(e, r, total);
            });
            arisisac::write_run(train_opt.out, cfg, res, "train");
            if (!train_opt.checkpoint.empty())
                agent.save(train_opt.checkpoint);
            std::printf("final reward %.6g  final SEE %.6g m^2\n", res.final_reward(), res.final_see());
        }
        else if (eval_cmd->parsed())
        {
            const auto cfg = resolve(eval_opt, false);
            const auto agent = arisisac::DdpgAgent::load(eval_opt.checkpoint, cfg.train);
            const auto res = arisisac::run_evaluation(cfg, agent, std::max(1, eval_opt.episodes));
            arisisac::write_run(eval_opt.out, cfg, res, "eval");
            std::printf("mean reward %.6g  final SEE %.6g m^2\n", res.final_reward(res.episode_rewards.size()),
                        res.final_see());
        }
        else if (cmp_cmd->parsed())
        {
            const auto cfg = resolve(cmp_opt, true);
            std::vector<arisisac::SchemeId> ids;
            for (const auto &s : schemes)
                ids.push_back(arisisac::parse_scheme(s));
            const auto runs = arisisac::compare_schemes(cfg, ids, seeds, threads);
            for (const auto &r : runs)
            {
                arisisac::ExperimentConfig rc = cfg;
                rc.scheme = r.scheme;
                rc.seed = r.seed;
                arisisac::write_run(fs::path(cmp_opt.out) / arisisac::to_string(r.scheme) / ("seed_" + std::to_string(r.seed)),
                                    rc, r, "compare");
            }
            const auto summary = arisisac::summarize(runs);
            arisisac::write_summary_csv(fs::path(cmp_opt.out) / "summary.csv", summary);
            arisisac::write_meta(fs::path(cmp_opt.out) / "meta.toml", cfg, "compare");
            for (const auto &s : summary)
                std::printf("%-10s reward %.6g +- %.3g  SEE %.6g (median %.6g)\n", arisisac::to_string(s.scheme).c_str(),
                            s.reward_mean, s.reward_std, s.see_mean, s.see_median);
        }
    }
    catch (const arisisac::ConfigError &e)
    {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 1;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
