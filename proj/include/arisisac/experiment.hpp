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

#ifndef ARISISAC_EXPERIMENT_HPP
#define ARISISAC_EXPERIMENT_HPP

#include "arisisac/agent.hpp"
#include "arisisac/config.hpp"
#include "arisisac/environment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace arisisac
{
    struct ResultTrace
    {
        SchemeId scheme = SchemeId::proposed;
        std::uint64_t seed = 0;
        std::vector<double> episode_rewards;
        std::vector<StepOutcome> slots;  // greedy evaluation episode

        // Mean accumulated reward over the last `window` episodes
        double final_reward(std::size_t window = 20) const
        {
            if (episode_rewards.empty())
                return 0.0;
            const std::size_t n = std::min(window, episode_rewards.size());
            return std::accumulate(episode_rewards.end() - static_cast<std::ptrdiff_t>(n), episode_rewards.end(), 0.0) /
                   static_cast<double>(n);
        }

        double final_see() const { return slots.empty() ? 0.0 : slots.back().see; }

        // Mean ARIS position over the last `count` slots of the evaluation episode
        Position3 converged_position(std::size_t count = 3) const
        {
            Position3 p{0.0, 0.0, 0.0};
            const std::size_t n = std::min(count, slots.size());
            for (std::size_t i = slots.size() - n; i < slots.size(); ++i)
            {
                p.x += slots[i].aris.x / static_cast<double>(n);
                p.y += slots[i].aris.y / static_cast<double>(n);
                p.z += slots[i].aris.z / static_cast<double>(n);
            }
            return p;
        }
    };

    // Trains a fresh agent and evaluates the greedy policy; the agent is returned through `trained`
    inline ResultTrace run_experiment(const ExperimentConfig &cfg, DdpgAgent *trained = nullptr,
                                      const EpisodeCallback &cb = {})
    {
        Environment env(cfg.env_config(), cfg.scene());
        DdpgAgent agent(cfg.train, cfg.v_max, cfg.w_max, cfg.seed);
        TrainResult tr = train(env, agent, cfg.seed, cb);
        ResultTrace res{cfg.scheme, cfg.seed, std::move(tr.episode_rewards), std::move(tr.final_trace)};
        if (trained != nullptr)
            *trained = std::move(agent);
        return res;
    }

    // Greedy episodes of a trained agent; the trace holds the first of them
    inline ResultTrace run_evaluation(const ExperimentConfig &cfg, const DdpgAgent &agent, int episodes = 1)
    {
        Environment env(cfg.env_config(), cfg.scene());
        ResultTrace res;
        res.scheme = cfg.scheme;
        res.seed = cfg.seed;
        for (int e = 0; e < std::max(1, episodes); ++e)
        {
            const std::uint64_t s = e == 0 ? evaluation_seed(cfg.seed) : episode_seed(evaluation_seed(cfg.seed), e);
            auto slots = evaluate(env, agent, s);
            double total = 0.0;
            for (const auto &o : slots)
                total += o.reward;
            res.episode_rewards.push_back(total);
            if (e == 0)
                res.slots = std::move(slots);
        }
        return res;
    }

    // Runs jobs(i) for i in [0, n) on up to `threads` workers; results are stored by index
    template <class Result, class Job>
    std::vector<Result> run_parallel(std::size_t n, unsigned threads, const Job &job)
    {
        std::vector<std::optional<Result>> slots(n);
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    slots[i].emplace(job(i));
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        };
        const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
        std::vector<std::thread> pool;
        for (unsigned i = 1; i < t; ++i)
            pool.emplace_back(worker);
        worker();
        for (auto &th : pool)
            th.join();
        if (failure)
            std::rethrow_exception(failure);
        std::vector<Result> out;
        out.reserve(n);
        for (auto &s : slots)
            out.push_back(std::move(*s));
        return out;
    }

    // One training run per (scheme, seed) pair; seeds are master_seed, master_seed + 1, ...
    inline std::vector<ResultTrace> compare_schemes(const ExperimentConfig &base, const std::vector<SchemeId> &schemes,
                                                    int seeds, unsigned threads = 1)
    {
        if (seeds < 1)
            throw ConfigError("seeds", "must be >= 1");
        const std::size_t n = schemes.size() * static_cast<std::size_t>(seeds);
        return run_parallel<ResultTrace>(n, threads, [&](std::size_t i) {
            ExperimentConfig cfg = base;
            cfg.scheme = schemes[i / static_cast<std::size_t>(seeds)];
            cfg.seed = base.seed + i % static_cast<std::size_t>(seeds);
            return run_experiment(cfg);
        });
    }

    struct SchemeSummary
    {
        SchemeId scheme = SchemeId::proposed;
        int runs = 0;
        double reward_mean = 0.0;
        double reward_std = 0.0;
        double see_mean = 0.0;
        double see_std = 0.0;
        double see_median = 0.0;
    };

    namespace detail
    {
        inline std::pair<double, double> mean_std(const std::vector<double> &v)
        {
            if (v.empty())
                return {0.0, 0.0};
            const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            double s = 0.0;
            for (double x : v)
                s += (x - m) * (x - m);
            return {m, v.size() > 1 ? std::sqrt(s / static_cast<double>(v.size() - 1)) : 0.0};
        }

        inline double median(std::vector<double> v)
        {
            if (v.empty())
                return 0.0;
            std::sort(v.begin(), v.end());
            const std::size_t h = v.size() / 2;
            return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
        }

        inline std::string csv_real(double v)
        {
            if (std::isnan(v))
                return "nan";
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.10g", v);
            return buf;
        }

        inline std::ofstream open_output(const std::filesystem::path &p)
        {
            if (p.has_parent_path())
                std::filesystem::create_directories(p.parent_path());
            std::ofstream f(p, std::ios::binary);
            if (!f)
                throw Error("cannot write '" + p.string() + "'");
            return f;
        }
    }

    // Per-scheme statistics of the final reward (last 20 episodes) and the final-slot SEE
    inline std::vector<SchemeSummary> summarize(const std::vector<ResultTrace> &runs)
    {
        std::vector<SchemeSummary> out;
        for (SchemeId s : {SchemeId::proposed, SchemeId::fixed_ris, SchemeId::without_nsp})
        {
            std::vector<double> rewards, sees;
            for (const auto &r : runs)
                if (r.scheme == s)
                {
                    rewards.push_back(r.final_reward());
                    sees.push_back(r.final_see());
                }
            if (rewards.empty())
                continue;
            SchemeSummary sum;
            sum.scheme = s;
            sum.runs = static_cast<int>(rewards.size());
            std::tie(sum.reward_mean, sum.reward_std) = detail::mean_std(rewards);
            std::tie(sum.see_mean, sum.see_std) = detail::mean_std(sees);
            sum.see_median = detail::median(sees);
            out.push_back(sum);
        }
        return out;
    }

    inline void write_reward_csv(const std::filesystem::path &p, const ResultTrace &r)
    {
        auto f = detail::open_output(p);
        f << "episode,reward\n";
        for (std::size_t e = 0; e < r.episode_rewards.size(); ++e)
            f << e + 1 << ',' << detail::csv_real(r.episode_rewards[e]) << '\n';
    }

    inline void write_trace_csv(const std::filesystem::path &p, const ResultTrace &r)
    {
        using detail::csv_real;
        auto f = detail::open_output(p);
        f << "slot,aris_x,aris_y,est_x,est_y,see,crb,min_sinr,feasible\n";
        for (const auto &o : r.slots)
            f << o.slot << ',' << csv_real(o.aris.x) << ',' << csv_real(o.aris.y) << ','
              << csv_real(o.next_state.est_target_x) << ',' << csv_real(o.next_state.est_target_y) << ','
              << csv_real(o.see) << ',' << csv_real(o.crb) << ',' << csv_real(o.min_sinr) << ','
              << (o.solution.feasible ? 1 : 0) << '\n';
    }

    inline void write_summary_csv(const std::filesystem::path &p, const std::vector<SchemeSummary> &rows)
    {
        using detail::csv_real;
        auto f = detail::open_output(p);
        f << "scheme,runs,final_reward_mean,final_reward_std,final_see_mean,final_see_std,final_see_median\n";
        for (const auto &s : rows)
            f << to_string(s.scheme) << ',' << s.runs << ',' << csv_real(s.reward_mean) << ',' << csv_real(s.reward_std)
              << ',' << csv_real(s.see_mean) << ',' << csv_real(s.see_std) << ',' << csv_real(s.see_median) << '\n';
    }

    inline void write_meta(const std::filesystem::path &p, const ExperimentConfig &cfg, const std::string &command)
    {
        auto f = detail::open_output(p);
        f << "# arisisac " << command << " run; reload with --config\n";
        f << to_text(cfg);
    }

    // reward.csv, trace.csv, summary.csv and meta.toml for one run
    inline void write_run(const std::filesystem::path &dir, const ExperimentConfig &cfg, const ResultTrace &r,
                          const std::string &command)
    {
        write_reward_csv(dir / "reward.csv", r);
        write_trace_csv(dir / "trace.csv", r);
        write_summary_csv(dir / "summary.csv", summarize({r}));
        write_meta(dir / "meta.toml", cfg, command);
    }
}

#endif
