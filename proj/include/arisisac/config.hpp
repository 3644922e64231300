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

#ifndef ARISISAC_CONFIG_HPP
#define ARISISAC_CONFIG_HPP

#include "arisisac/agent.hpp"
#include "arisisac/environment.hpp"
#include "arisisac/types.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace arisisac
{
    // Full experiment description. Powers and gains are kept in the logarithmic units of the
    // parameter table and converted to linear SI values by env_config().
    struct ExperimentConfig
    {
        double a = 3.5;
        double p_ap_dbm = 40.0;
        double sigma_s2_dbm = -110.0;
        double sigma_k2_dbm = -100.0;
        double gamma_si_db = -110.0;
        double beta0_db = -20.0;
        double beta_s_db = -47.0;
        double bandwidth_hz = 1e6;
        std::optional<double> g_p;  // 0.1 B when unset
        double gamma_th_db = 10.0;
        double v_max = 8.0;
        double w_max = 100.0;
        double altitude = 50.0;
        double delta_t = 1.0;
        int total_slots = 12;
        int num_ap_antennas = 16;
        int num_ris_elements = 16;
        int num_users = 3;
        double r_p = 10.0;
        bool penalize_infeasible = true;
        PhaseModel phase_model = PhaseModel::random;

        Position3 ap{0.0, -120.0, 0.0};
        Position3 target{60.0, 40.0, 0.0};
        std::vector<Position3> users = Scene{}.users;
        Position3 aris_start{0.0, -80.0, 50.0};

        TrainConfig train;
        SchemeId scheme = SchemeId::proposed;
        std::uint64_t seed = 1;

        double processing_gain() const { return g_p ? *g_p : 0.1 * bandwidth_hz; }

        Scene scene() const
        {
            if (num_users < 0)
                throw ConfigError("K", "must be >= 0");
            if (static_cast<std::size_t>(num_users) > users.size())
                throw ConfigError("K", "exceeds the " + std::to_string(users.size()) + " listed users");
            Scene s;
            s.ap = ap;
            s.target = target;
            s.users.assign(users.begin(), users.begin() + num_users);
            s.map = {w_max, altitude, delta_t, total_slots};
            s.aris_start = {aris_start.x, aris_start.y, altitude};
            s.validate();
            return s;
        }

        EnvConfig env_config() const
        {
            EnvConfig e;
            e.channel.beta0 = db_to_linear(beta0_db);
            e.channel.beta_s = db_to_linear(beta_s_db);
            e.channel.si_power = db_to_linear(gamma_si_db);
            e.channel.num_ap_antennas = num_ap_antennas;
            e.channel.num_ris_elements = num_ris_elements;
            e.channel.phase_model = phase_model;
            e.budget.noise_user = dbm_to_watt(sigma_k2_dbm);
            e.budget.noise_ap = dbm_to_watt(sigma_s2_dbm);
            e.budget.sinr_threshold = db_to_linear(gamma_th_db);
            e.budget.total_power = dbm_to_watt(p_ap_dbm);
            e.sensing.a_const = a;
            e.sensing.g_p = processing_gain();
            e.sensing.noise_ap = e.budget.noise_ap;
            e.sensing.total_power = e.budget.total_power;
            e.sensing.beta_s = e.channel.beta_s;
            e.v_max = v_max;
            e.penalty = r_p;
            e.penalize_infeasible = penalize_infeasible;
            e.scheme = scheme;
            e.validate();
            return e;
        }

        void validate() const
        {
            if (!(bandwidth_hz > 0.0))
                throw ConfigError("B", "must be > 0");
            if (g_p && !(*g_p > 0.0))
                throw ConfigError("G_p", "must be > 0");
            if (!(w_max > 0.0))
                throw ConfigError("W_max", "must be > 0");
            if (!(altitude >= 0.0))
                throw ConfigError("H", "must be >= 0");
            if (!(delta_t > 0.0))
                throw ConfigError("Delta", "must be > 0");
            if (total_slots < 1)
                throw ConfigError("L_tot", "must be >= 1");
            (void)scene();
            (void)env_config();
            train.validate();
        }
    };

    namespace detail
    {
        inline std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        inline std::string unquote(const std::string &s)
        {
            const std::string t = trim(s);
            if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front())
                return t.substr(1, t.size() - 2);
            return t;
        }

        inline double parse_real(const std::string &key, const std::string &text)
        {
            const std::string t = trim(text);
            double v = 0.0;
            const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (t.empty() || ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v))
                throw ConfigError(key, "expected a number, got '" + t + "'");
            return v;
        }

        inline long long parse_integer(const std::string &key, const std::string &text)
        {
            const std::string t = trim(text);
            long long v = 0;
            const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (t.empty() || ec != std::errc() || p != t.data() + t.size())
                throw ConfigError(key, "expected an integer, got '" + t + "'");
            return v;
        }

        inline bool parse_bool(const std::string &key, const std::string &text)
        {
            const std::string t = unquote(text);
            if (t == "true" || t == "1")
                return true;
            if (t == "false" || t == "0")
                return false;
            throw ConfigError(key, "expected true or false, got '" + t + "'");
        }

        // Splits "[a, [b, c], d]" into top-level items
        inline std::vector<std::string> split_list(const std::string &key, const std::string &text)
        {
            const std::string t = trim(text);
            if (t.size() < 2 || t.front() != '[' || t.back() != ']')
                throw ConfigError(key, "expected a bracketed list, got '" + t + "'");
            std::vector<std::string> items;
            std::string cur;
            int depth = 0;
            for (std::size_t i = 1; i + 1 < t.size(); ++i)
            {
                const char c = t[i];
                if (c == '[')
                    ++depth;
                if (c == ']')
                    --depth;
                if (depth < 0)
                    throw ConfigError(key, "unbalanced brackets");
                if (c == ',' && depth == 0)
                {
                    items.push_back(trim(cur));
                    cur.clear();
                }
                else
                {
                    cur += c;
                }
            }
            if (depth != 0)
                throw ConfigError(key, "unbalanced brackets");
            if (!trim(cur).empty())
                items.push_back(trim(cur));
            else if (!items.empty())
                throw ConfigError(key, "empty list item");
            return items;
        }

        // Ground point [x, y]; a third coordinate must be 0
        inline Position3 parse_ground_point(const std::string &key, const std::string &text)
        {
            const auto items = split_list(key, text);
            if (items.size() != 2 && items.size() != 3)
                throw ConfigError(key, "expected [x, y]");
            Position3 p{parse_real(key, items[0]), parse_real(key, items[1]), 0.0};
            if (items.size() == 3 && parse_real(key, items[2]) != 0.0)
                throw ConfigError(key, "ground nodes have z = 0");
            return p;
        }

        inline std::string format_real(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        inline std::string format_point(const Position3 &p)
        {
            return "[" + format_real(p.x) + ", " + format_real(p.y) + "]";
        }

        inline int to_int(const std::string &key, long long v, long long lo = 0)
        {
            if (v < lo || v > 1000000000LL)
                throw ConfigError(key, "out of range");
            return static_cast<int>(v);
        }
    }

    // Applies one key = value setting. Logarithmic keys carry a unit suffix; the plain key takes a
    // linear SI value.
    inline void apply_setting(ExperimentConfig &c, const std::string &raw_key, const std::string &value)
    {
        using namespace detail;
        const std::string key = trim(raw_key);
        auto real = [&] { return parse_real(key, value); };
        auto positive = [&](const std::string &name) {
            const double v = parse_real(name, value);
            if (!(v > 0.0))
                throw ConfigError(name, "must be > 0");
            return v;
        };
        auto integer = [&](long long lo) { return to_int(key, parse_integer(key, value), lo); };

        if (key == "a")
            c.a = real();
        else if (key == "P_AP_dBm")
            c.p_ap_dbm = real();
        else if (key == "P_AP")
            c.p_ap_dbm = watt_to_dbm(positive("P_AP"));
        else if (key == "sigma_s2_dBm")
            c.sigma_s2_dbm = real();
        else if (key == "sigma_s2")
            c.sigma_s2_dbm = watt_to_dbm(positive("sigma_s2"));
        else if (key == "sigma_k2_dBm")
            c.sigma_k2_dbm = real();
        else if (key == "sigma_k2")
            c.sigma_k2_dbm = watt_to_dbm(positive("sigma_k2"));
        else if (key == "gamma_SI_dB")
            c.gamma_si_db = real();
        else if (key == "gamma_SI")
            c.gamma_si_db = linear_to_db(positive("gamma_SI"));
        else if (key == "beta_0_dB")
            c.beta0_db = real();
        else if (key == "beta_0")
            c.beta0_db = linear_to_db(positive("beta_0"));
        else if (key == "beta_s_dB")
            c.beta_s_db = real();
        else if (key == "beta_s")
            c.beta_s_db = linear_to_db(positive("beta_s"));
        else if (key == "B")
            c.bandwidth_hz = positive("B");
        else if (key == "G_p")
            c.g_p = positive("G_p");
        else if (key == "Gamma_th_dB")
            c.gamma_th_db = real();
        else if (key == "Gamma_th")
            c.gamma_th_db = linear_to_db(positive("Gamma_th"));
        else if (key == "v_max")
            c.v_max = positive("v_max");
        else if (key == "W_max")
            c.w_max = positive("W_max");
        else if (key == "H")
            c.altitude = real();
        else if (key == "Delta")
            c.delta_t = positive("Delta");
        else if (key == "L_tot")
            c.total_slots = integer(1);
        else if (key == "M")
            c.num_ap_antennas = integer(1);
        else if (key == "N")
            c.num_ris_elements = integer(1);
        else if (key == "K")
            c.num_users = integer(0);
        else if (key == "r_p")
            c.r_p = real();
        else if (key == "penalize_infeasible")
            c.penalize_infeasible = parse_bool(key, value);
        else if (key == "phase_model")
        {
            const std::string v = unquote(value);
            if (v == "random")
                c.phase_model = PhaseModel::random;
            else if (v == "los" || v == "line_of_sight")
                c.phase_model = PhaseModel::line_of_sight;
            else
                throw ConfigError(key, "expected random or los, got '" + v + "'");
        }
        else if (key == "ap")
            c.ap = parse_ground_point(key, value);
        else if (key == "target")
            c.target = parse_ground_point(key, value);
        else if (key == "aris_start")
            c.aris_start = parse_ground_point(key, value);
        else if (key == "users")
        {
            c.users.clear();
            for (const auto &item : split_list(key, value))
                c.users.push_back(parse_ground_point(key, item));
            c.num_users = static_cast<int>(c.users.size());
        }
        else if (key == "gamma")
            c.train.gamma = real();
        else if (key == "tau")
            c.train.tau = real();
        else if (key == "lr")
            c.train.actor_lr = c.train.critic_lr = real();
        else if (key == "actor_lr")
            c.train.actor_lr = real();
        else if (key == "critic_lr")
            c.train.critic_lr = real();
        else if (key == "batch")
            c.train.batch = integer(1);
        else if (key == "capacity")
            c.train.capacity = integer(1);
        else if (key == "E_max" || key == "episodes")
            c.train.episodes = integer(1);
        else if (key == "noise_std")
            c.train.noise_std = real();
        else if (key == "noise_decay")
            c.train.noise_decay = real();
        else if (key == "updates_per_episode")
            c.train.updates_per_episode = integer(0);
        else if (key == "reward_scale")
            c.train.reward_scale = real();
        else if (key == "hidden")
        {
            c.train.hidden.clear();
            for (const auto &item : split_list(key, value))
                c.train.hidden.push_back(to_int(key, parse_integer(key, item), 1));
        }
        else if (key == "scheme")
            c.scheme = parse_scheme(unquote(value));
        else if (key == "seed")
        {
            const std::string t = trim(value);
            std::uint64_t s = 0;
            const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), s);
            if (t.empty() || ec != std::errc() || p != t.data() + t.size())
                throw ConfigError(key, "expected an unsigned integer, got '" + t + "'");
            c.seed = s;
        }
        else
            throw ConfigError(key, "unknown key");
    }

    // key = value lines; '#' starts a comment; [section] headers group keys and are otherwise
    // ignored, except that [derived] sections are skipped entirely.
    inline void apply_text(ExperimentConfig &c, std::istream &in, const std::string &origin)
    {
        std::string line;
        int lineno = 0;
        bool skipping = false;
        while (std::getline(in, line))
        {
            ++lineno;
            bool quoted = false;
            for (std::size_t i = 0; i < line.size(); ++i)
            {
                if (line[i] == '"')
                    quoted = !quoted;
                if (line[i] == '#' && !quoted)
                {
                    line.resize(i);
                    break;
                }
            }
            const std::string t = detail::trim(line);
            if (t.empty())
                continue;
            if (t.front() == '[' && t.back() == ']' && t.find('=') == std::string::npos)
            {
                skipping = detail::trim(t.substr(1, t.size() - 2)) == "derived";
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("", origin + ":" + std::to_string(lineno) + ": expected key = value");
            if (skipping)
                continue;
            apply_setting(c, t.substr(0, eq), t.substr(eq + 1));
        }
    }

    using Overrides = std::vector<std::pair<std::string, std::string>>;

    // "key=value" -> (key, value)
    inline std::pair<std::string, std::string> parse_override(const std::string &kv)
    {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError(kv, "override must have the form key=value");
        return {detail::trim(kv.substr(0, eq)), kv.substr(eq + 1)};
    }

    // Defaults, then the file (if any), then overrides in order
    inline ExperimentConfig load_config(const std::string &path, const Overrides &overrides = {})
    {
        ExperimentConfig c;
        if (!path.empty())
        {
            std::ifstream f(path);
            if (!f)
                throw ConfigError("config", "cannot open '" + path + "'");
            apply_text(c, f, path);
        }
        for (const auto &[k, v] : overrides)
            apply_setting(c, k, v);
        c.validate();
        return c;
    }

    inline ExperimentConfig parse_config(const std::string &text, const Overrides &overrides = {})
    {
        ExperimentConfig c;
        std::istringstream in(text);
        apply_text(c, in, "<string>");
        for (const auto &[k, v] : overrides)
            apply_setting(c, k, v);
        c.validate();
        return c;
    }

    // Resolved configuration in the loadable text format, followed by the linear values in use
    inline std::string to_text(const ExperimentConfig &c)
    {
        using detail::format_point;
        using detail::format_real;
        std::ostringstream o;
        o << "[physical]\n";
        o << "a = " << format_real(c.a) << "\n";
        o << "P_AP_dBm = " << format_real(c.p_ap_dbm) << "\n";
        o << "sigma_s2_dBm = " << format_real(c.sigma_s2_dbm) << "\n";
        o << "sigma_k2_dBm = " << format_real(c.sigma_k2_dbm) << "\n";
        o << "gamma_SI_dB = " << format_real(c.gamma_si_db) << "\n";
        o << "beta_0_dB = " << format_real(c.beta0_db) << "\n";
        o << "beta_s_dB = " << format_real(c.beta_s_db) << "\n";
        o << "B = " << format_real(c.bandwidth_hz) << "\n";
        if (c.g_p)
            o << "G_p = " << format_real(*c.g_p) << "\n";
        o << "Gamma_th_dB = " << format_real(c.gamma_th_db) << "\n";
        o << "v_max = " << format_real(c.v_max) << "\n";
        o << "W_max = " << format_real(c.w_max) << "\n";
        o << "H = " << format_real(c.altitude) << "\n";
        o << "Delta = " << format_real(c.delta_t) << "\n";
        o << "L_tot = " << c.total_slots << "\n";
        o << "M = " << c.num_ap_antennas << "\n";
        o << "N = " << c.num_ris_elements << "\n";
        o << "r_p = " << format_real(c.r_p) << "\n";
        o << "penalize_infeasible = " << (c.penalize_infeasible ? "true" : "false") << "\n";
        o << "phase_model = \"" << (c.phase_model == PhaseModel::random ? "random" : "los") << "\"\n";
        o << "\n[scene]\n";
        o << "ap = " << format_point(c.ap) << "\n";
        o << "target = " << format_point(c.target) << "\n";
        o << "aris_start = " << format_point(c.aris_start) << "\n";
        o << "users = [";
        for (std::size_t k = 0; k < c.users.size(); ++k)
            o << (k ? ", " : "") << format_point(c.users[k]);
        o << "]\n";
        o << "K = " << c.num_users << "\n";
        o << "\n[train]\n";
        o << "gamma = " << format_real(c.train.gamma) << "\n";
        o << "tau = " << format_real(c.train.tau) << "\n";
        o << "actor_lr = " << format_real(c.train.actor_lr) << "\n";
        o << "critic_lr = " << format_real(c.train.critic_lr) << "\n";
        o << "batch = " << c.train.batch << "\n";
        o << "capacity = " << c.train.capacity << "\n";
        o << "E_max = " << c.train.episodes << "\n";
        o << "noise_std = " << format_real(c.train.noise_std) << "\n";
        o << "noise_decay = " << format_real(c.train.noise_decay) << "\n";
        o << "updates_per_episode = " << c.train.updates_per_episode << "\n";
        o << "reward_scale = " << format_real(c.train.reward_scale) << "\n";
        o << "hidden = [";
        for (std::size_t l = 0; l < c.train.hidden.size(); ++l)
            o << (l ? ", " : "") << c.train.hidden[l];
        o << "]\n";
        o << "\n[run]\n";
        o << "scheme = \"" << to_string(c.scheme) << "\"\n";
        o << "seed = " << c.seed << "\n";

        const EnvConfig e = c.env_config();
        o << "\n[derived]\n";
        o << "P_AP = " << format_real(e.budget.total_power) << "  # W\n";
        o << "sigma_s2 = " << format_real(e.budget.noise_ap) << "  # W\n";
        o << "sigma_k2 = " << format_real(e.budget.noise_user) << "  # W\n";
        o << "gamma_SI = " << format_real(e.channel.si_power) << "\n";
        o << "beta_0 = " << format_real(e.channel.beta0) << "\n";
        o << "beta_s = " << format_real(e.channel.beta_s) << "\n";
        o << "G_p = " << format_real(e.sensing.g_p) << "\n";
        o << "Gamma_th = " << format_real(e.budget.sinr_threshold) << "\n";
        return o.str();
    }
}

#endif
