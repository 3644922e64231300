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

#ifndef ARISISAC_ENVIRONMENT_HPP
#define ARISISAC_ENVIRONMENT_HPP

#include "arisisac/beamforming.hpp"
#include "arisisac/channel.hpp"
#include "arisisac/geometry.hpp"
#include "arisisac/sensing.hpp"
#include "arisisac/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace arisisac
{
    struct Scene
    {
        Position3 ap{0.0, -120.0, 0.0};
        std::vector<Position3> users{{-50.0, -40.0, 0.0}, {-38.0, -52.0, 0.0}, {-62.0, -30.0, 0.0}};
        Position3 target{60.0, 40.0, 0.0};
        MapSpec map;
        Position3 aris_start{0.0, -80.0, 50.0};

        void validate() const
        {
            if (!map.valid())
                throw ConfigError("map", "w_max, delta_t and L_tot must be positive");
            if (!ap.valid() || ap.z != 0.0)
                throw ConfigError("ap", "ground node must be finite with z = 0");
            if (!target.valid() || target.z != 0.0)
                throw ConfigError("target", "ground node must be finite with z = 0");
            for (const auto &u : users)
                if (!u.valid() || u.z != 0.0)
                    throw ConfigError("users", "ground node must be finite with z = 0");
            if (!aris_start.valid() || aris_start.z != map.altitude)
                throw ConfigError("aris_start", "must be finite and at the map altitude");
            if (!in_bounds(aris_start, map))
                throw ConfigError("aris_start", "must lie inside the map");
        }
    };

    enum class SchemeId
    {
        proposed,
        fixed_ris,
        without_nsp
    };

    inline std::string to_string(SchemeId s)
    {
        switch (s)
        {
        case SchemeId::proposed:
            return "proposed";
        case SchemeId::fixed_ris:
            return "fixed-ris";
        case SchemeId::without_nsp:
            return "no-nsp";
        }
        return "unknown";
    }

    inline SchemeId parse_scheme(const std::string &s)
    {
        if (s == "proposed")
            return SchemeId::proposed;
        if (s == "fixed-ris" || s == "fixed_ris")
            return SchemeId::fixed_ris;
        if (s == "no-nsp" || s == "without_nsp" || s == "without-nsp")
            return SchemeId::without_nsp;
        throw ConfigError("scheme", "unknown scheme '" + s + "' (proposed|fixed-ris|no-nsp)");
    }

    // Agent observation: ARIS position and current target estimate [m]
    struct MdpState
    {
        double aris_x = 0.0;
        double aris_y = 0.0;
        double est_target_x = 0.0;
        double est_target_y = 0.0;

        bool operator==(const MdpState &) const = default;
    };

    // Network input: every component divided by w_max
    inline std::array<double, 4> normalized(const MdpState &s, double w_max)
    {
        return {s.aris_x / w_max, s.aris_y / w_max, s.est_target_x / w_max, s.est_target_y / w_max};
    }

    struct EnvConfig
    {
        ChannelParams channel;
        LinkBudget budget;
        SensingParams sensing;
        SolverOptions solver;
        MleOptions mle;
        double v_max = 8.0;
        double penalty = 10.0;              // r_p
        bool penalize_infeasible = true;    // r_p also charged when the SINR constraints cannot be met
        SchemeId scheme = SchemeId::proposed;

        void validate() const
        {
            channel.validate();
            budget.validate();
            sensing.validate();
            if (!(v_max > 0.0))
                throw ConfigError("v_max", "must be > 0");
            if (!(penalty >= 0.0))
                throw ConfigError("r_p", "must be >= 0");
        }
    };

    struct StepOutcome
    {
        int slot = 0;                    // 1-based index of the slot just executed
        MdpState next_state;
        Position3 aris;                  // hover point of this slot
        double reward = 0.0;
        double crb = std::numeric_limits<double>::infinity();
        double see = 0.0;                // squared estimation error [m^2]
        bool out_of_bounds = false;
        bool measured = false;           // a range measurement was taken this slot
        double variance = std::numeric_limits<double>::infinity();
        double residual_interference = 0.0;
        double min_sinr = std::numeric_limits<double>::infinity();
        BeamformingSolution solution;
        bool done = false;
    };

    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Independent engine for (seed, stream)
    inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream)
    {
        return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x51ed270b27a5ULL)));
    }

    // 1/CRB for a slot that took a measurement, minus r_p per violated constraint.
    // Slots without a measurement earn only the penalty terms.
    inline double slot_reward(double crb, bool measured, bool out_of_bounds, bool infeasible, const EnvConfig &cfg)
    {
        double reward = (measured && std::isfinite(crb) && crb > 0.0) ? 1.0 / crb : 0.0;
        if (out_of_bounds)
            reward -= cfg.penalty;
        if (cfg.penalize_infeasible && infeasible)
            reward -= cfg.penalty;
        return reward;
    }

    // One ARIS episode. Single-threaded; distinct instances are independent.
    class Environment
    {
    public:
        Environment(EnvConfig cfg, Scene scene) : cfg_(std::move(cfg)), scene_(std::move(scene))
        {
            cfg_.validate();
            scene_.validate();
            reset(0);
        }

        const EnvConfig &config() const { return cfg_; }
        const Scene &scene() const { return scene_; }
        const MdpState &state() const { return state_; }
        const MeasurementSet &history() const { return history_; }
        const Position3 &aris() const { return aris_; }
        int slot() const { return slot_; }
        bool done() const { return slot_ >= scene_.map.total_slots; }
        void set_scheme(SchemeId s) { cfg_.scheme = s; }

        MdpState reset(std::uint64_t seed)
        {
            channel_rng_ = make_rng(seed, 1);
            noise_rng_ = make_rng(seed, 2);
            aris_ = scene_.aris_start;
            history_ = {};
            frozen_phases_.reset();
            slot_ = 0;
            state_ = {aris_.x, aris_.y, 0.0, 0.0};
            return state_;
        }

        StepOutcome step(const Velocity2 &action)
        {
            if (done())
                throw Error("Environment::step: episode finished");
            StepOutcome out;
            out.slot = ++slot_;

            const Velocity2 v = clamp_velocity(action, cfg_.v_max);
            Position3 next = advance(aris_, v, scene_.map.delta_t);
            if (!in_bounds(next, scene_.map))
            {
                out.out_of_bounds = true;
                next = aris_;
            }
            aris_ = next;
            out.aris = aris_;

            const SlotGeometry geo{scene_.ap, aris_, scene_.target, scene_.users};
            const ChannelSet ch = realize_channels(cfg_.channel, geo, &channel_rng_);

            BeamformingSolution sol = solve(ch);
            bool receiver_ok = true;
            try
            {
                if (cfg_.scheme == SchemeId::without_nsp)
                    sol.f_rx = matched_receive_beamformer(ch, sol.phases);
                else
                    sol.f_rx = nsp_receive_beamformer(ch, sol);
            }
            catch (const NspDegenerate &)
            {
                receiver_ok = false;
            }
            catch (const NoEcho &)
            {
                receiver_ok = false;
            }

            if (receiver_ok)
                out.residual_interference = residual_interference_power(ch, sol);
            for (double s : sol.sinr)
                out.min_sinr = std::min(out.min_sinr, s);

            // A range measurement needs a working receiver and a dedicated sensing stream.
            if (receiver_ok && sol.feasible && sol.sensing_power() > 0.0)
            {
                try
                {
                    const double var = measurement_variance(cfg_.sensing, ch, sol, ch.target_distance);
                    const double meas = sample_measurement(noise_rng_, ch.target_distance, var);
                    history_.push(aris_, ch.target_distance, meas, var);
                    out.measured = true;
                    out.variance = var;
                }
                catch (const NoEcho &)
                {
                }
            }

            if (!history_.empty())
            {
                const LocalizationResult est = mle_localize(history_, scene_.map.w_max, cfg_.mle);
                state_.est_target_x = est.x;
                state_.est_target_y = est.y;
            }
            state_.aris_x = aris_.x;
            state_.aris_y = aris_.y;

            out.crb = history_.empty() ? std::numeric_limits<double>::infinity()
                                       : crb_or_infinity(history_, state_.est_target_x, state_.est_target_y);
            out.reward = slot_reward(out.crb, out.measured, out.out_of_bounds, !sol.feasible, cfg_);

            const double ex = state_.est_target_x - scene_.target.x;
            const double ey = state_.est_target_y - scene_.target.y;
            out.see = ex * ex + ey * ey;
            out.next_state = state_;
            out.solution = std::move(sol);
            out.done = done();
            return out;
        }

    private:
        BeamformingSolution solve(const ChannelSet &ch)
        {
            if (cfg_.scheme == SchemeId::fixed_ris)
            {
                if (!frozen_phases_)
                    frozen_phases_ = align_phases_to_target(ch, cfg_.solver.alignment_sweeps);
                return allocate_beamformers(ch, *frozen_phases_, cfg_.budget);
            }
            return optimize_phases_and_beamformers(ch, cfg_.budget, cfg_.solver);
        }

        EnvConfig cfg_;
        Scene scene_;
        std::mt19937_64 channel_rng_;
        std::mt19937_64 noise_rng_;
        Position3 aris_;
        MeasurementSet history_;
        std::optional<CVec> frozen_phases_;
        MdpState state_;
        int slot_ = 0;
    };

    using Policy = std::function<Velocity2(const MdpState &)>;

    inline std::vector<StepOutcome> run_episode(Environment &env, const Policy &policy, std::uint64_t seed)
    {
        std::vector<StepOutcome> outcomes;
        MdpState s = env.reset(seed);
        while (!env.done())
        {
            outcomes.push_back(env.step(policy(s)));
            s = outcomes.back().next_state;
        }
        return outcomes;
    }
}

#endif
