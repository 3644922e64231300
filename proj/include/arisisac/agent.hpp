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

#ifndef ARISISAC_AGENT_HPP
#define ARISISAC_AGENT_HPP

#include "arisisac/environment.hpp"
#include "arisisac/mlp.hpp"
#include "arisisac/types.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace arisisac
{
    struct TrainConfig
    {
        double gamma = 0.95;
        double tau = 0.005;
        double actor_lr = 3e-4;
        double critic_lr = 3e-4;
        int batch = 70;
        int capacity = 8000;
        double noise_std = 2.0;            // exploration noise [m/s]
        double noise_decay = 0.995;        // per episode
        int episodes = 500;                // E_max
        int updates_per_episode = 1;       // minibatch updates after each episode
        std::vector<int> hidden{300, 100, 100};
        double reward_scale = 1.0;         // applied to rewards stored for learning

        void validate() const
        {
            if (!(gamma >= 0.0 && gamma <= 1.0))
                throw ConfigError("gamma", "must lie in [0, 1]");
            if (!(tau > 0.0 && tau <= 1.0))
                throw ConfigError("tau", "must lie in (0, 1]");
            if (!(actor_lr > 0.0))
                throw ConfigError("actor_lr", "must be > 0");
            if (!(critic_lr > 0.0))
                throw ConfigError("critic_lr", "must be > 0");
            if (batch < 1)
                throw ConfigError("batch", "must be >= 1");
            if (capacity < batch)
                throw ConfigError("capacity", "must be >= batch");
            if (!(noise_std >= 0.0))
                throw ConfigError("noise_std", "must be >= 0");
            if (!(noise_decay > 0.0 && noise_decay <= 1.0))
                throw ConfigError("noise_decay", "must lie in (0, 1]");
            if (episodes < 1)
                throw ConfigError("episodes", "must be >= 1");
            if (updates_per_episode < 0)
                throw ConfigError("updates_per_episode", "must be >= 0");
            for (int h : hidden)
                if (h < 1)
                    throw ConfigError("hidden", "layer sizes must be >= 1");
            if (!(reward_scale > 0.0))
                throw ConfigError("reward_scale", "must be > 0");
        }
    };

    struct Transition
    {
        MdpState state;
        Velocity2 action;
        double reward = 0.0;
        MdpState next_state;
        bool done = false;
    };

    // Fixed-capacity FIFO of transitions
    class ReplayBuffer
    {
    public:
        explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity)
        {
            if (capacity == 0)
                throw ConfigError("capacity", "must be >= 1");
            data_.reserve(capacity);
        }

        void push(const Transition &t)
        {
            if (data_.size() < capacity_)
                data_.push_back(t);
            else
                data_[head_] = t;
            head_ = (head_ + 1) % capacity_;
        }

        std::size_t size() const { return data_.size(); }
        std::size_t capacity() const { return capacity_; }

        // i-th transition counted from the oldest one kept
        const Transition &at(std::size_t i) const
        {
            if (i >= data_.size())
                throw Error("ReplayBuffer::at: index out of range");
            return data_.size() < capacity_ ? data_[i] : data_[(head_ + i) % capacity_];
        }

        // Uniform sample without replacement
        std::vector<Transition> sample(std::size_t n, std::mt19937_64 &rng) const
        {
            if (n > data_.size())
                throw Error("ReplayBuffer::sample: not enough transitions");
            std::vector<Transition> out;
            out.reserve(n);
            std::sample(data_.begin(), data_.end(), std::back_inserter(out), n, rng);
            return out;
        }

    private:
        std::size_t capacity_;
        std::size_t head_ = 0;
        std::vector<Transition> data_;
    };

    inline double td_target(double reward, double next_q, double gamma, bool done)
    {
        return done ? reward : reward + gamma * next_q;
    }

    struct LossAndGrad
    {
        double value = 0.0;
        RVec grad;
    };

    // Mean squared TD error over a batch; inputs are critic inputs (features x batch)
    inline LossAndGrad critic_loss_and_grad(const Mlp &critic, const RMat &inputs, const RVec &targets)
    {
        if (inputs.cols() != targets.size())
            throw ShapeMismatch("critic_loss_and_grad: batch size mismatch");
        Mlp::Cache cache;
        const RMat q = critic.forward(inputs, cache);
        const double n = static_cast<double>(targets.size());
        const RMat err = q - targets.transpose();
        LossAndGrad out;
        out.value = err.squaredNorm() / n;
        out.grad = critic.backward(cache, 2.0 * err / n);
        return out;
    }

    // Mean Q(s, mu(s)) over a batch and its gradient with respect to the actor parameters.
    // The critic sees [state; action / v_max], which is the raw tanh output of the actor.
    inline LossAndGrad actor_objective_and_grad(const Mlp &actor, const Mlp &critic, const RMat &states)
    {
        Mlp::Cache actor_cache;
        const RMat raw = actor.forward(states, actor_cache);
        RMat critic_in(states.rows() + raw.rows(), states.cols());
        critic_in.topRows(states.rows()) = states;
        critic_in.bottomRows(raw.rows()) = raw;
        Mlp::Cache critic_cache;
        const RMat q = critic.forward(critic_in, critic_cache);
        const double n = static_cast<double>(states.cols());
        RMat dq_din;
        critic.backward(critic_cache, RMat::Constant(1, states.cols(), 1.0 / n), &dq_din);
        LossAndGrad out;
        out.value = q.sum() / n;
        out.grad = actor.backward(actor_cache, dq_din.bottomRows(raw.rows()));
        return out;
    }

    struct UpdateStats
    {
        bool performed = false; // false when the buffer held fewer transitions than one batch
        double critic_loss = 0.0;
        double actor_objective = 0.0;
    };

    // action + N(0, std^2) per component, clamped to [-v_max, v_max]
    inline Velocity2 explore(const Velocity2 &action, double std, std::mt19937_64 &rng, double v_max)
    {
        Velocity2 v = action;
        if (std > 0.0)
        {
            std::normal_distribution<double> n(0.0, std);
            v.vx += n(rng);
            v.vy += n(rng);
        }
        return clamp_velocity(v, v_max);
    }

    // Actor 4 -> hidden -> 2 with v_max tanh output; critic [s; a / v_max] -> hidden -> 1.
    // States are fed normalized by w_max.
    class DdpgAgent
    {
    public:
        DdpgAgent(const TrainConfig &cfg, double v_max, double w_max, std::uint64_t seed)
            : cfg_(cfg), v_max_(v_max), w_max_(w_max), actor_opt_(cfg.actor_lr), critic_opt_(cfg.critic_lr)
        {
            cfg_.validate();
            if (!(v_max > 0.0))
                throw ConfigError("v_max", "must be > 0");
            if (!(w_max > 0.0))
                throw ConfigError("W_max", "must be > 0");
            std::mt19937_64 rng = make_rng(seed, 5);
            actor_ = Mlp(4, cfg_.hidden, 2, OutputActivation::tanh, rng);
            critic_ = Mlp(6, cfg_.hidden, 1, OutputActivation::linear, rng);
            target_actor_ = actor_;
            target_critic_ = critic_;
        }

        const TrainConfig &config() const { return cfg_; }
        double v_max() const { return v_max_; }
        double w_max() const { return w_max_; }
        const Mlp &actor() const { return actor_; }
        const Mlp &critic() const { return critic_; }
        const Mlp &target_actor() const { return target_actor_; }
        const Mlp &target_critic() const { return target_critic_; }
        Mlp &actor() { return actor_; }
        Mlp &critic() { return critic_; }

        RVec state_input(const MdpState &s) const
        {
            const auto n = normalized(s, w_max_);
            return Eigen::Map<const RVec>(n.data(), 4);
        }

        Velocity2 act(const MdpState &s) const
        {
            const RMat out = actor_.forward(state_input(s));
            return {v_max_ * out(0, 0), v_max_ * out(1, 0)};
        }

        // Deterministic action plus N(0, std^2) per component, clamped to [-v_max, v_max]
        Velocity2 explore(const MdpState &s, std::mt19937_64 &rng, double std) const
        {
            return arisisac::explore(act(s), std, rng, v_max_);
        }

        double q_value(const MdpState &s, const Velocity2 &a) const
        {
            RVec in(6);
            in.head(4) = state_input(s);
            in[4] = a.vx / v_max_;
            in[5] = a.vy / v_max_;
            return critic_.forward(in)(0, 0);
        }

        // One critic step, one actor step, then soft target updates
        UpdateStats update(const std::vector<Transition> &batch)
        {
            if (batch.empty())
                throw Error("DdpgAgent::update: empty batch");
            const auto n = static_cast<Eigen::Index>(batch.size());
            RMat s(4, n), s_next(4, n), critic_in(6, n);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                const Transition &t = batch[static_cast<std::size_t>(i)];
                s.col(i) = state_input(t.state);
                s_next.col(i) = state_input(t.next_state);
                critic_in.col(i).head(4) = s.col(i);
                critic_in(4, i) = std::clamp(t.action.vx, -v_max_, v_max_) / v_max_;
                critic_in(5, i) = std::clamp(t.action.vy, -v_max_, v_max_) / v_max_;
            }
            RMat next_in(6, n);
            next_in.topRows(4) = s_next;
            next_in.bottomRows(2) = target_actor_.forward(s_next);
            const RMat next_q = target_critic_.forward(next_in);
            RVec y(n);
            for (Eigen::Index i = 0; i < n; ++i)
            {
                const Transition &t = batch[static_cast<std::size_t>(i)];
                y[i] = td_target(cfg_.reward_scale * t.reward, next_q(0, i), cfg_.gamma, t.done);
            }

            UpdateStats st;
            st.performed = true;
            const LossAndGrad c = critic_loss_and_grad(critic_, critic_in, y);
            RVec cp = critic_.flat();
            critic_opt_.step(cp, c.grad);
            critic_.set_flat(cp);
            st.critic_loss = c.value;

            const LossAndGrad a = actor_objective_and_grad(actor_, critic_, s);
            RVec ap = actor_.flat();
            actor_opt_.step(ap, -a.grad); // ascent on Q
            actor_.set_flat(ap);
            st.actor_objective = a.value;

            soft_update(target_critic_, critic_, cfg_.tau);
            soft_update(target_actor_, actor_, cfg_.tau);
            return st;
        }

        // One update from a uniform minibatch; no-op when the buffer is smaller than a batch
        UpdateStats update(const ReplayBuffer &buffer, std::mt19937_64 &rng)
        {
            const auto b = static_cast<std::size_t>(cfg_.batch);
            if (buffer.size() < b)
                return {};
            return update(buffer.sample(b, rng));
        }

        // Text checkpoint; values are written as hexadecimal floats so a reload is bit-exact
        void save(const std::string &path) const
        {
            std::ofstream f(path);
            if (!f)
                throw Error("cannot write checkpoint '" + path + "'");
            f << "arisisac-ddpg 1\n";
            f << "v_max " << std::hexfloat << v_max_ << "\n";
            f << "w_max " << w_max_ << "\n";
            f << "hidden";
            for (int h : cfg_.hidden)
                f << ' ' << h;
            f << "\n" << std::defaultfloat << std::setprecision(17);
            f << "config gamma=" << cfg_.gamma << " tau=" << cfg_.tau << " actor_lr=" << cfg_.actor_lr
              << " critic_lr=" << cfg_.critic_lr << " batch=" << cfg_.batch << " capacity=" << cfg_.capacity
              << " episodes=" << cfg_.episodes << " updates_per_episode=" << cfg_.updates_per_episode
              << " reward_scale=" << cfg_.reward_scale << "\n";
            write_net(f, "actor", actor_);
            write_net(f, "critic", critic_);
            write_net(f, "target_actor", target_actor_);
            write_net(f, "target_critic", target_critic_);
            if (!f)
                throw Error("failed writing checkpoint '" + path + "'");
        }

        static DdpgAgent load(const std::string &path, TrainConfig cfg = {})
        {
            std::ifstream f(path);
            if (!f)
                throw Error("cannot read checkpoint '" + path + "'");
            std::string tag;
            int version = 0;
            f >> tag >> version;
            if (tag != "arisisac-ddpg" || version != 1)
                throw Error("'" + path + "' is not a checkpoint");
            std::string key, tok;
            f >> key >> tok;
            const double v_max = std::strtod(tok.c_str(), nullptr);
            f >> key >> tok;
            const double w_max = std::strtod(tok.c_str(), nullptr);
            f >> key;
            if (key != "hidden")
                throw Error("checkpoint '" + path + "': missing layer sizes");
            std::string line;
            std::getline(f, line);
            std::istringstream hs(line);
            cfg.hidden.clear();
            for (int h; hs >> h;)
                cfg.hidden.push_back(h);
            f >> key;
            if (key != "config")
                throw Error("checkpoint '" + path + "': missing config echo");
            std::getline(f, line);
            DdpgAgent agent(cfg, v_max, w_max, 0);
            read_net(f, "actor", agent.actor_);
            read_net(f, "critic", agent.critic_);
            read_net(f, "target_actor", agent.target_actor_);
            read_net(f, "target_critic", agent.target_critic_);
            return agent;
        }

    private:
        static void write_net(std::ostream &f, const std::string &name, const Mlp &net)
        {
            const RVec p = net.flat();
            f << name << ' ' << std::dec << p.size() << '\n' << std::hexfloat;
            for (Eigen::Index i = 0; i < p.size(); ++i)
                f << p[i] << (i + 1 == p.size() || (i + 1) % 8 == 0 ? '\n' : ' ');
        }

        static void read_net(std::istream &f, const std::string &name, Mlp &net)
        {
            std::string key;
            Eigen::Index n = 0;
            f >> key >> n;
            if (key != name || n != net.num_params())
                throw ShapeMismatch("checkpoint: block '" + key + "' does not match network '" + name + "'");
            RVec p(n);
            std::string tok;
            for (Eigen::Index i = 0; i < n; ++i)
            {
                if (!(f >> tok))
                    throw Error("checkpoint: truncated block '" + name + "'");
                p[i] = std::strtod(tok.c_str(), nullptr);
            }
            net.set_flat(p);
        }

        TrainConfig cfg_;
        double v_max_;
        double w_max_;
        Mlp actor_, critic_, target_actor_, target_critic_;
        Adam actor_opt_, critic_opt_;
    };

    struct TrainResult
    {
        std::vector<double> episode_rewards;
        std::vector<StepOutcome> final_trace; // greedy evaluation episode after training
    };

    using EpisodeCallback = std::function<void(int episode, double reward)>;

    inline std::uint64_t episode_seed(std::uint64_t seed, std::uint64_t episode)
    {
        return splitmix64(seed ^ splitmix64(episode + 0x3c6ef372fe94f82bULL));
    }

    // Seed used for the greedy evaluation episode
    inline std::uint64_t evaluation_seed(std::uint64_t seed) { return splitmix64(seed ^ 0xa54ff53a5f1d36f1ULL); }

    inline std::vector<StepOutcome> evaluate(Environment &env, const DdpgAgent &agent, std::uint64_t seed)
    {
        return run_episode(env, [&](const MdpState &s) { return agent.act(s); }, seed);
    }

    // Exploration episodes; after each one the networks take `updates_per_episode` minibatch steps
    inline TrainResult train(Environment &env, DdpgAgent &agent, std::uint64_t seed, const EpisodeCallback &cb = {})
    {
        const TrainConfig &cfg = agent.config();
        ReplayBuffer buffer(static_cast<std::size_t>(cfg.capacity));
        std::mt19937_64 noise_rng = make_rng(seed, 3);
        std::mt19937_64 sample_rng = make_rng(seed, 4);
        TrainResult res;
        double noise = cfg.noise_std;
        for (int e = 0; e < cfg.episodes; ++e)
        {
            MdpState s = env.reset(episode_seed(seed, static_cast<std::uint64_t>(e)));
            double total = 0.0;
            while (!env.done())
            {
                const Velocity2 a = agent.explore(s, noise_rng, noise);
                const StepOutcome out = env.step(a);
                buffer.push({s, a, out.reward, out.next_state, out.done});
                total += out.reward;
                s = out.next_state;
            }
            for (int u = 0; u < cfg.updates_per_episode; ++u)
                agent.update(buffer, sample_rng);
            noise *= cfg.noise_decay;
            res.episode_rewards.push_back(total);
            if (cb)
                cb(e, total);
        }
        res.final_trace = evaluate(env, agent, evaluation_seed(seed));
        return res;
    }
}

#endif
