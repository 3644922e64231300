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

#ifndef ARISISAC_CHANNEL_HPP
#define ARISISAC_CHANNEL_HPP

#include "arisisac/geometry.hpp"
#include "arisisac/types.hpp"

#include <random>
#include <vector>

namespace arisisac
{
    // How the per-entry phases of the AP-RIS and RIS-user links are realized.
    //  line_of_sight : phase-free real gains
    //  random        : i.i.d. uniform phase per entry, redrawn every slot (quasi-static flat fading);
    //                  the modulus is unchanged
    enum class PhaseModel
    {
        line_of_sight,
        random
    };

    struct ChannelParams
    {
        double beta0 = 0.01;                // G2A reference power gain at 1 m
        double beta_s = 1.9952623149688e-5; // two-way reference gain incl. RCS at 1 m
        double si_power = 1e-11;            // residual SI channel power gain
        double ris_spacing = 0.5;           // RIS element spacing / wavelength
        double ap_spacing = 0.5;            // AP antenna spacing / wavelength
        int num_ap_antennas = 16;           // M
        int num_ris_elements = 16;          // N
        PhaseModel phase_model = PhaseModel::random;

        void validate() const
        {
            if (!(beta0 > 0.0))
                throw ConfigError("beta0", "must be > 0");
            if (!(beta_s > 0.0))
                throw ConfigError("beta_s", "must be > 0");
            if (!(si_power > 0.0))
                throw ConfigError("gamma_si", "must be > 0");
            if (!(ris_spacing > 0.0))
                throw ConfigError("ris_spacing", "must be > 0");
            if (!(ap_spacing > 0.0))
                throw ConfigError("ap_spacing", "must be > 0");
            if (num_ap_antennas < 1)
                throw ConfigError("M", "must be >= 1");
            if (num_ris_elements < 1)
                throw ConfigError("N", "must be >= 1");
        }
    };

    // Node positions for one slot
    struct SlotGeometry
    {
        Position3 ap;
        Position3 aris;
        Position3 target;
        std::vector<Position3> users;
    };

    // All channels of one slot
    struct ChannelSet
    {
        CMat g_ap_ris;                   // N x M
        std::vector<CVec> h_ris_user;    // K vectors of length N
        CVec a_target;                   // N, RIS steering toward the target
        std::vector<CVec> a_clutter;     // K vectors of length N, steering toward each user
        cplx alpha_target{0.0, 0.0};     // two-way target amplitude
        std::vector<cplx> alpha_clutter; // two-way clutter amplitudes
        CMat g_si;                       // M x M residual self-interference
        double target_distance = 0.0;    // ARIS-target distance [m]

        Eigen::Index num_ap_antennas() const { return g_ap_ris.cols(); }
        Eigen::Index num_ris_elements() const { return g_ap_ris.rows(); }
        std::size_t num_users() const { return h_ris_user.size(); }
    };

    // Link amplitude sqrt(beta0)/d, so that |entry|^2 equals the power gain beta0/d^2
    inline double link_amplitude(const ChannelParams &params, const Position3 &a, const Position3 &b)
    {
        const double d = distance(a, b);
        if (!(d > 0.0))
            throw DegenerateGeometry("link_amplitude: zero distance");
        return std::sqrt(params.beta0) / d;
    }

    // Phase-free N x M AP-to-RIS channel
    inline CMat ap_ris_channel(const ChannelParams &params, const Position3 &p_ap, const Position3 &p_aris)
    {
        const double amp = link_amplitude(params, p_ap, p_aris);
        return CMat::Constant(params.num_ris_elements, params.num_ap_antennas, cplx(amp, 0.0));
    }

    // Phase-free RIS-to-user channel of length N
    inline CVec ris_user_channel(const ChannelParams &params, const Position3 &p_aris, const Position3 &p_user)
    {
        const double amp = link_amplitude(params, p_aris, p_user);
        return CVec::Constant(params.num_ris_elements, cplx(amp, 0.0));
    }

    // Uniform linear array response, entry n = exp(j 2 pi n (d/lambda) sin(theta))
    inline CVec steering(const ChannelParams &params, double sin_theta)
    {
        CVec a(params.num_ris_elements);
        for (int n = 0; n < params.num_ris_elements; ++n)
            a[n] = std::polar(1.0, 2.0 * pi * n * params.ris_spacing * sin_theta);
        return a;
    }

    // Two-way amplitude sqrt(beta_s / d^4)
    inline double two_way_gain(const ChannelParams &params, double d)
    {
        if (!(d > 0.0))
            throw DegenerateGeometry("two_way_gain: zero distance");
        return std::sqrt(params.beta_s) / (d * d);
    }

    // Target plus clutter response seen by the RIS (N x N)
    inline CMat target_response(const ChannelSet &ch)
    {
        CMat h = ch.alpha_target * (ch.a_target * ch.a_target.adjoint());
        for (std::size_t k = 0; k < ch.a_clutter.size(); ++k)
            h += ch.alpha_clutter[k] * (ch.a_clutter[k] * ch.a_clutter[k].adjoint());
        return h;
    }

    // Unit-gain target response a a^H
    inline CMat unit_target_response(const ChannelSet &ch)
    {
        return ch.a_target * ch.a_target.adjoint();
    }

    // Residual SI channel: sqrt(gamma_si) exp(-j 2 pi |i-j| (d/lambda))
    inline CMat si_channel(const ChannelParams &params)
    {
        const int m = params.num_ap_antennas;
        const double amp = std::sqrt(params.si_power);
        CMat g(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                g(i, j) = std::polar(amp, -2.0 * pi * std::abs(i - j) * params.ap_spacing);
        return g;
    }

    // Realize every channel of one slot. `rng` is required for PhaseModel::random.
    inline ChannelSet realize_channels(const ChannelParams &params, const SlotGeometry &geo, std::mt19937_64 *rng = nullptr)
    {
        params.validate();
        ChannelSet ch;
        ch.g_ap_ris = ap_ris_channel(params, geo.ap, geo.aris);
        ch.h_ris_user.reserve(geo.users.size());
        for (const auto &u : geo.users)
            ch.h_ris_user.push_back(ris_user_channel(params, geo.aris, u));

        if (params.phase_model == PhaseModel::random)
        {
            if (rng == nullptr)
                throw Error("realize_channels: random phase model needs a random source");
            std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
            for (Eigen::Index m = 0; m < ch.g_ap_ris.cols(); ++m)
                for (Eigen::Index n = 0; n < ch.g_ap_ris.rows(); ++n)
                    ch.g_ap_ris(n, m) *= std::polar(1.0, phase(*rng));
            for (auto &h : ch.h_ris_user)
                for (Eigen::Index n = 0; n < h.size(); ++n)
                    h[n] *= std::polar(1.0, phase(*rng));
        }

        ch.target_distance = distance(geo.aris, geo.target);
        ch.a_target = steering(params, doa_sine(geo.aris, geo.target));
        ch.alpha_target = two_way_gain(params, ch.target_distance);
        for (const auto &u : geo.users)
        {
            ch.a_clutter.push_back(steering(params, doa_sine(geo.aris, u)));
            ch.alpha_clutter.emplace_back(two_way_gain(params, distance(geo.aris, u)));
        }
        ch.g_si = si_channel(params);
        return ch;
    }
}

#endif
