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

#include "arisisac/config.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace arisisac;

namespace
{
    std::string config_key_of(const std::function<void()> &f)
    {
        try
        {
            f();
        }
        catch (const ConfigError &e)
        {
            return e.key();
        }
        return "<no error>";
    }
}

TEST(Config, EmptyTextGivesDefaults)
{
    const ExperimentConfig c = parse_config("");
    const EnvConfig e = c.env_config();
    EXPECT_NEAR(e.budget.sinr_threshold, 10.0, 1e-12);
    EXPECT_NEAR(e.budget.total_power, 10.0, 1e-12);
    EXPECT_NEAR(e.budget.noise_ap, 1e-14, 1e-26);
    EXPECT_NEAR(e.budget.noise_user, 1e-13, 1e-25);
    EXPECT_NEAR(e.channel.beta0, 0.01, 1e-15);
    EXPECT_NEAR(e.channel.beta_s, std::pow(10.0, -4.7), 1e-17);
    EXPECT_NEAR(e.channel.si_power, 1e-11, 1e-23);
    EXPECT_NEAR(e.sensing.g_p, 1e5, 1e-9);
    EXPECT_EQ(e.sensing.a_const, 3.5);
    EXPECT_EQ(c.train.batch, 70);
    EXPECT_EQ(c.train.capacity, 8000);
    EXPECT_EQ(c.train.episodes, 500);
    EXPECT_EQ(c.train.gamma, 0.95);
    EXPECT_EQ(c.train.tau, 0.005);
    EXPECT_EQ(c.scene().map.total_slots, 12);
    EXPECT_EQ(c.scene().users.size(), 3u);
}

TEST(Config, OverrideSupersedesFile)
{
    const auto path = std::filesystem::temp_directory_path() / "arisisac_cfg_test.toml";
    {
        std::ofstream f(path);
        f << "# test\n[train]\ngamma = 0.8\nbatch = 16\n";
    }
    EXPECT_EQ(load_config(path.string()).train.gamma, 0.8);
    const ExperimentConfig c = load_config(path.string(), {parse_override("gamma=0.9")});
    EXPECT_EQ(c.train.gamma, 0.9);
    EXPECT_EQ(c.train.batch, 16);
    std::filesystem::remove(path);
    EXPECT_EQ(config_key_of([&] { load_config(path.string()); }), "config");
}

TEST(Config, NegativePowerNamesKey)
{
    EXPECT_EQ(config_key_of([] { parse_config("P_AP = -1"); }), "P_AP");
    EXPECT_EQ(config_key_of([] { parse_config("bogus = 1"); }), "bogus");
    EXPECT_EQ(config_key_of([] { parse_config("gamma = 2"); }), "gamma");
    EXPECT_EQ(config_key_of([] { parse_config("M = x"); }), "M");
    EXPECT_EQ(config_key_of([] { parse_config("K = 4"); }), "K");
    EXPECT_EQ(config_key_of([] { parse_override("novalue"); }), "novalue");
}

TEST(Config, LinearAndDecibelKeysAgree)
{
    const ExperimentConfig a = parse_config("P_AP = 10\nGamma_th = 10\nsigma_s2 = 1e-14");
    const ExperimentConfig b = parse_config("P_AP_dBm = 40\nGamma_th_dB = 10\nsigma_s2_dBm = -110");
    EXPECT_NEAR(a.env_config().budget.total_power, b.env_config().budget.total_power, 1e-12);
    EXPECT_NEAR(a.env_config().budget.sinr_threshold, b.env_config().budget.sinr_threshold, 1e-12);
    EXPECT_NEAR(a.env_config().budget.noise_ap, b.env_config().budget.noise_ap, 1e-26);
}

TEST(Config, SceneAndListsParse)
{
    const ExperimentConfig c = parse_config(
        "users = [[-10, -20], [30, 40]]\ntarget = [5, 6]\nhidden = [16, 8]\nscheme = \"no-nsp\"\nseed = 42\n");
    EXPECT_EQ(c.num_users, 2);
    EXPECT_EQ(c.scene().users[1], (Position3{30, 40, 0}));
    EXPECT_EQ(c.target, (Position3{5, 6, 0}));
    EXPECT_EQ(c.train.hidden, (std::vector<int>{16, 8}));
    EXPECT_EQ(c.scheme, SchemeId::without_nsp);
    EXPECT_EQ(c.seed, 42u);
}

TEST(Config, TextRoundTrip)
{
    const ExperimentConfig c = parse_config("M = 8\nN = 4\nK = 2\nGamma_th_dB = 14\nE_max = 33\nlr = 1e-3\n"
                                            "target = [1.25, -3]\nphase_model = los\npenalize_infeasible = false");
    const ExperimentConfig back = parse_config(to_text(c));
    EXPECT_EQ(to_text(back), to_text(c));
    EXPECT_EQ(back.num_ap_antennas, 8);
    EXPECT_EQ(back.num_ris_elements, 4);
    EXPECT_EQ(back.gamma_th_db, 14.0);
    EXPECT_EQ(back.train.episodes, 33);
    EXPECT_EQ(back.train.actor_lr, 1e-3);
    EXPECT_EQ(back.train.critic_lr, 1e-3);
    EXPECT_EQ(back.phase_model, PhaseModel::line_of_sight);
    EXPECT_FALSE(back.penalize_infeasible);
}

TEST(Config, ShippedConfigsLoad)
{
    const std::filesystem::path dir = ARISISAC_CONFIG_DIR;
    for (const char *name : {"desk.toml", "sweep.toml"})
        EXPECT_NO_THROW(load_config((dir / name).string())) << name;
}
