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

#include "arisisac/agent.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

using namespace arisisac;

namespace
{
    RVec fd_critic_grad(Mlp net, const RMat &in, const RVec &y, double h)
    {
        const RVec p0 = net.flat();
        RVec g(p0.size());
        for (Eigen::Index i = 0; i < p0.size(); ++i)
        {
            RVec p = p0;
            p[i] += h;
            net.set_flat(p);
            const double up = critic_loss_and_grad(net, in, y).value;
            p[i] -= 2.0 * h;
            net.set_flat(p);
            const double down = critic_loss_and_grad(net, in, y).value;
            g[i] = (up - down) / (2.0 * h);
        }
        return g;
    }

    RVec fd_actor_grad(Mlp actor, const Mlp &critic, const RMat &s, double h)
    {
        const RVec p0 = actor.flat();
        RVec g(p0.size());
        for (Eigen::Index i = 0; i < p0.size(); ++i)
        {
            RVec p = p0;
            p[i] += h;
            actor.set_flat(p);
            const double up = actor_objective_and_grad(actor, critic, s).value;
            p[i] -= 2.0 * h;
            actor.set_flat(p);
            const double down = actor_objective_and_grad(actor, critic, s).value;
            g[i] = (up - down) / (2.0 * h);
        }
        return g;
    }

    RMat random_matrix(int r, int c, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        RMat m(r, c);
        for (Eigen::Index i = 0; i < m.size(); ++i)
            m(i) = u(rng);
        return m;
    }

    TrainConfig tiny_config()
    {
        TrainConfig c;
        c.hidden = {8, 8};
        c.batch = 4;
        c.capacity = 64;
        return c;
    }
}

TEST(Mlp, ZeroParametersGiveZeroAction)
{
    DdpgAgent agent(tiny_config(), 8.0, 100.0, 1);
    agent.actor().set_flat(RVec::Zero(agent.actor().num_params()));
    const Velocity2 a = agent.act({10, -20, 30, 40});
    EXPECT_EQ(a.vx, 0.0);
    EXPECT_EQ(a.vy, 0.0);
    agent.critic().set_flat(RVec::Zero(agent.critic().num_params()));
    EXPECT_EQ(agent.q_value({1, 2, 3, 4}, {5, 6}), 0.0);
}

TEST(Mlp, ActionSaturatesAtVmax)
{
    DdpgAgent agent(tiny_config(), 8.0, 100.0, 1);
    RVec p = agent.actor().flat();
    p.tail(2).setConstant(1e3); // output biases
    agent.actor().set_flat(p);
    const Velocity2 a = agent.act({0, 0, 0, 0});
    EXPECT_DOUBLE_EQ(a.vx, 8.0);
    EXPECT_DOUBLE_EQ(a.vy, 8.0);
}

TEST(Mlp, DeterministicAndBatchConsistent)
{
    std::mt19937_64 rng(2);
    const Mlp net(4, {6, 5}, 3, OutputActivation::tanh, rng);
    const RMat x = random_matrix(4, 7, rng);
    const RMat batch = net.forward(x);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        EXPECT_LT((net.forward(RMat(x.col(j))) - batch.col(j)).norm(), 1e-15);
    EXPECT_EQ(net.forward(x), batch);
}

TEST(Mlp, ContinuousInAction)
{
    DdpgAgent agent(tiny_config(), 8.0, 100.0, 3);
    const MdpState s{10, 20, 30, 40};
    const double q0 = agent.q_value(s, {1.0, 2.0});
    EXPECT_LT(std::abs(agent.q_value(s, {1.0 + 1e-9, 2.0}) - q0), 1e-7);
}

TEST(Mlp, FlatRoundTripAndShapeCheck)
{
    std::mt19937_64 rng(3);
    Mlp net(3, {4}, 2, OutputActivation::linear, rng);
    EXPECT_EQ(net.num_params(), 3 * 4 + 4 + 4 * 2 + 2);
    const RVec p = net.flat();
    net.set_flat(p);
    EXPECT_EQ(net.flat(), p);
    EXPECT_THROW(net.set_flat(RVec::Zero(3)), ShapeMismatch);
    EXPECT_THROW(net.forward(RMat::Zero(2, 1)), ShapeMismatch);
}

TEST(Agent, TdTargetExamples)
{
    EXPECT_NEAR(td_target(1.0, 2.0, 0.95, false), 2.9, 1e-15);
    EXPECT_EQ(td_target(1.5, 7.0, 0.0, false), 1.5);
    EXPECT_EQ(td_target(1.5, 7.0, 0.95, true), 1.5);
}

TEST(Agent, SoftUpdateExamples)
{
    std::mt19937_64 rng(4);
    const Mlp source(2, {3}, 1, OutputActivation::linear, rng);
    Mlp target = source;
    target.set_flat(RVec::Zero(source.num_params()));
    Mlp unchanged = target;
    soft_update(unchanged, source, 0.0);
    EXPECT_EQ(unchanged.flat(), RVec::Zero(source.num_params()));
    Mlp copy = target;
    soft_update(copy, source, 1.0);
    EXPECT_EQ(copy.flat(), source.flat());

    Mlp ones = source;
    ones.set_flat(RVec::Ones(source.num_params()));
    soft_update(target, ones, 0.005);
    for (Eigen::Index i = 0; i < target.num_params(); ++i)
        EXPECT_NEAR(target.flat()[i], 0.005, 1e-15);

    const Mlp other(2, {4}, 1, OutputActivation::linear, rng);
    EXPECT_THROW(soft_update(target, other, 0.5), ShapeMismatch);
}

TEST(Agent, CriticGradientOnToyNetwork)
{
    std::mt19937_64 rng(5);
    const Mlp net(1, {1}, 1, OutputActivation::linear, rng, 1.0);
    ASSERT_EQ(net.num_params(), 4);
    RMat in(1, 3);
    in << 0.5, 1.5, -0.25;
    RVec y(3);
    y << 1.0, -2.0, 0.5;
    const RVec g = critic_loss_and_grad(net, in, y).grad;
    const RVec fd = fd_critic_grad(net, in, y, 1e-6);
    EXPECT_LE((g - fd).norm(), 1e-4 * fd.norm());
}

TEST(Agent, CriticAndActorGradientsMatchFiniteDifferences)
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial)
    {
        const Mlp critic(6, {5, 4, 3}, 1, OutputActivation::linear, rng, 0.5);
        const Mlp actor(4, {5, 4, 3}, 2, OutputActivation::tanh, rng, 0.5);
        const RMat in = random_matrix(6, 8, rng);
        const RVec y = random_matrix(8, 1, rng);
        const RVec gc = critic_loss_and_grad(critic, in, y).grad;
        const RVec fc = fd_critic_grad(critic, in, y, 1e-6);
        EXPECT_LE((gc - fc).norm(), 1e-4 * fc.norm());

        const RMat s = random_matrix(4, 8, rng);
        const RVec ga = actor_objective_and_grad(actor, critic, s).grad;
        const RVec fa = fd_actor_grad(actor, critic, s, 1e-6);
        EXPECT_LE((ga - fa).norm(), 1e-4 * fa.norm());
    }
}

TEST(Agent, ExploreExamples)
{
    std::mt19937_64 rng(7);
    EXPECT_EQ(explore({1.5, -2.0}, 0.0, rng, 8.0), (Velocity2{1.5, -2.0}));
    for (int i = 0; i < 100; ++i)
    {
        const Velocity2 v = explore({8.0, 8.0}, 2.0, rng, 8.0);
        EXPECT_LE(v.vx, 8.0);
        EXPECT_LE(v.vy, 8.0);
        EXPECT_GE(v.vx, -8.0);
    }
    std::mt19937_64 a(8), b(8);
    EXPECT_EQ(explore({0, 0}, 1.0, a, 8.0), explore({0, 0}, 1.0, b, 8.0));
}

TEST(Agent, ReplayEvictsOldestAndSamplesWithoutReplacement)
{
    ReplayBuffer buf(4);
    for (int i = 0; i < 6; ++i)
    {
        Transition t;
        t.reward = i;
        buf.push(t);
    }
    EXPECT_EQ(buf.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_EQ(buf.at(i).reward, static_cast<double>(i + 2));
    std::mt19937_64 rng(9);
    const auto s = buf.sample(4, rng);
    std::set<double> seen;
    for (const auto &t : s)
        seen.insert(t.reward);
    EXPECT_EQ(seen, (std::set<double>{2, 3, 4, 5}));
    EXPECT_THROW(buf.sample(5, rng), Error);
    EXPECT_THROW(ReplayBuffer(0), ConfigError);
}

TEST(Agent, UpdateNeedsAFullBatch)
{
    DdpgAgent agent(tiny_config(), 8.0, 100.0, 10);
    ReplayBuffer buf(64);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 3; ++i)
        buf.push({});
    const RVec before = agent.critic().flat();
    EXPECT_FALSE(agent.update(buf, rng).performed);
    EXPECT_EQ(agent.critic().flat(), before);
    buf.push({});
    EXPECT_TRUE(agent.update(buf, rng).performed);
    EXPECT_NE(agent.critic().flat(), before);
}

TEST(Agent, BanditCriticConvergesToReward)
{
    TrainConfig c = tiny_config();
    c.gamma = 0.0;
    c.hidden = {300, 100, 100};
    c.batch = 70;
    c.capacity = 8000;
    DdpgAgent agent(c, 8.0, 100.0, 12);
    Transition t;
    t.state = {10, 20, 30, 40};
    t.action = {1, -1};
    t.reward = 1.0;
    t.next_state = t.state;
    const std::vector<Transition> batch(70, t);
    for (int i = 0; i < 2000; ++i)
        agent.update(batch);
    EXPECT_NEAR(agent.q_value(t.state, t.action), 1.0, 1e-2);
}

TEST(Agent, CheckpointRoundTripIsExact)
{
    DdpgAgent agent(tiny_config(), 8.0, 100.0, 13);
    const std::vector<Transition> batch(4, Transition{{1, 2, 3, 4}, {1, 1}, 0.5, {2, 3, 3, 4}, false});
    agent.update(batch);
    const auto path = std::filesystem::temp_directory_path() / "arisisac_ckpt_test.txt";
    agent.save(path.string());
    const DdpgAgent back = DdpgAgent::load(path.string(), tiny_config());
    EXPECT_EQ(back.actor().flat(), agent.actor().flat());
    EXPECT_EQ(back.critic().flat(), agent.critic().flat());
    EXPECT_EQ(back.target_actor().flat(), agent.target_actor().flat());
    EXPECT_EQ(back.target_critic().flat(), agent.target_critic().flat());
    EXPECT_EQ(back.v_max(), 8.0);
    EXPECT_EQ(back.w_max(), 100.0);
    std::filesystem::remove(path);
    EXPECT_THROW(DdpgAgent::load(path.string()), Error);
}

TEST(Agent, AdamMinimizesQuadratic)
{
    Adam opt(0.05);
    RVec p(2);
    p << 3.0, -2.0;
    for (int i = 0; i < 2000; ++i)
        opt.step(p, 2.0 * p);
    EXPECT_LT(p.norm(), 1e-2);
}

TEST(Agent, ConfigValidation)
{
    TrainConfig c;
    c.gamma = 1.5;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.capacity = 10;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(DdpgAgent(TrainConfig{}, 0.0, 100.0, 1), ConfigError);
}

TEST(Agent, TrainingHistoryMatchesEpisodes)
{
    EnvConfig ec;
    ec.channel.num_ap_antennas = 4;
    ec.channel.num_ris_elements = 4;
    Scene scene;
    scene.users.resize(2);
    Environment env(ec, scene);
    TrainConfig c = tiny_config();
    c.episodes = 1;
    c.batch = 12;
    c.capacity = 12;
    DdpgAgent agent(c, 8.0, 100.0, 14);
    const TrainResult r = train(env, agent, 14);
    EXPECT_EQ(r.episode_rewards.size(), 1u);
    EXPECT_EQ(r.final_trace.size(), 12u);

    c.episodes = 3;
    DdpgAgent a2(c, 8.0, 100.0, 14);
    int calls = 0;
    const TrainResult r3 = train(env, a2, 14, [&](int, double) { ++calls; });
    EXPECT_EQ(r3.episode_rewards.size(), 3u);
    EXPECT_EQ(calls, 3);
    EXPECT_EQ(r3.episode_rewards[0], r.episode_rewards[0]);
}
