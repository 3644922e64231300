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

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

using namespace arisisac;

namespace
{
    MeasurementSet noiseless(const std::vector<Position3> &hover, const Position3 &target, double variance)
    {
        MeasurementSet ms;
        for (const auto &h : hover)
        {
            const double d = distance(h, target);
            ms.push(h, d, d, variance);
        }
        return ms;
    }
}

TEST(Sensing, VarianceExamples)
{
    EXPECT_NEAR(variance_from_snr(3.5, 35.0), 0.1, 1e-15);

    SensingParams p;
    const double v1 = measurement_variance(p, 1e-9, 70.0);
    EXPECT_NEAR(measurement_variance(p, 1e-9, 140.0) / v1, 16.0, 1e-12);
    SensingParams twice = p;
    twice.total_power *= 2.0;
    EXPECT_NEAR(measurement_variance(twice, 1e-9, 70.0) / v1, 0.5, 1e-15);
    EXPECT_GT(measurement_variance(p, 1e-9, 70.0, 1e-14), v1);
    EXPECT_THROW(measurement_variance(p, 0.0, 70.0), NoEcho);
}

TEST(Sensing, VarianceMatchesClosedForm)
{
    const SensingParams p;
    const double d = 80.0, z = 3e-10;
    const double expect = p.a_const * p.noise_ap * std::pow(d, 4) / (p.total_power * p.g_p * p.beta_s * z);
    EXPECT_NEAR(measurement_variance(p, z, d), expect, 1e-12 * expect);
}

TEST(Sensing, ReceivedEchoBoundedByUnitEcho)
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 20; ++i)
    {
        const ChannelSet ch = fixtures::random_slot(rng, 8, 8, 2);
        BeamformingSolution sol = optimize_phases_and_beamformers(ch, LinkBudget{});
        const double full = unit_echo_norm_sq(ch, sol.phases);
        const double matched = received_echo_norm_sq(ch, sol.phases, matched_receive_beamformer(ch, sol.phases));
        EXPECT_NEAR(matched, full, 1e-10 * full);
        const double nsp = received_echo_norm_sq(ch, sol.phases, nsp_receive_beamformer(ch, sol));
        EXPECT_LE(nsp, full * (1.0 + 1e-12));
    }
}

TEST(Sensing, SampleMeasurement)
{
    std::mt19937_64 a(5), b(5);
    EXPECT_EQ(sample_measurement(a, 42.0, 0.0), 42.0);
    EXPECT_EQ(sample_measurement(a, 42.0, 0.3), sample_measurement(b, 42.0, 0.3));

    std::mt19937_64 rng(6);
    const int n = 100000;
    const double d = 80.0, var = 4.0;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += sample_measurement(rng, d, var);
    EXPECT_LE(std::abs(sum / n - d), 4.0 * std::sqrt(var) / std::sqrt(static_cast<double>(n)));
}

TEST(Sensing, FimDistanceExamples)
{
    MeasurementSet ms;
    ms.push({0, 0, 50}, 2.0, 2.0, 1.0);
    ms.push({1, 0, 50}, 10.0, 10.0, 0.01);
    const RMat j = fim_distances(ms);
    EXPECT_NEAR(j(0, 0), 3.0, 1e-14);
    EXPECT_NEAR(j(1, 1), 100.08, 1e-11);
    EXPECT_EQ(j(0, 1), 0.0);
    EXPECT_EQ(j(1, 0), 0.0);
}

TEST(Sensing, SingleHoverAboveTargetIsSingular)
{
    const MeasurementSet ms = noiseless({{0, 0, 50}}, {0, 0, 0}, 1.0);
    EXPECT_THROW(coordinate_fim(ms, 0.0, 0.0), SingularGeometry);
    EXPECT_TRUE(std::isinf(crb_or_infinity(ms, 0.0, 0.0)));
}

TEST(Sensing, CollinearHoverPointsAreSingularInY)
{
    const MeasurementSet ms = noiseless({{100, 0, 50}, {-100, 0, 50}}, {0, 0, 0}, 1.0);
    const RMat jd = fim_distances(ms);
    const double d = std::sqrt(12500.0);
    RMat q(2, 2);
    q << -100.0 / d, 100.0 / d, 0.0, 0.0;
    const RMat jp = q * jd * q.transpose();
    EXPECT_NEAR(jp(0, 0), 2.0 * jd(0, 0) * (1e4 / 12500.0), 1e-12);
    EXPECT_EQ(jp(1, 1), 0.0);
    EXPECT_THROW(coordinate_fim(ms, 0.0, 0.0), SingularGeometry);
}

TEST(Sensing, CrbMatchesExplicitInverse)
{
    const std::vector<Position3> hover{{30, 0, 50}, {0, 40, 50}, {-20, -25, 50}};
    const Position3 tgt{5, -3, 0};
    MeasurementSet ms;
    for (const auto &h : hover)
    {
        const double d = distance(h, tgt);
        ms.push(h, d, d, 1.0 / (1.0 - 8.0 / (d * d))); // unit FIM entries
    }
    const FisherResult fr = coordinate_fim(ms, tgt.x, tgt.y);
    for (int l = 0; l < 3; ++l)
        EXPECT_NEAR(fr.fim_dist(l, l), 1.0, 1e-12);
    double a = 0, b = 0, c = 0;
    for (const auto &h : hover)
    {
        const double d = distance(h, tgt);
        const double qx = (tgt.x - h.x) / d, qy = (tgt.y - h.y) / d;
        a += qx * qx;
        b += qx * qy;
        c += qy * qy;
    }
    const double det = a * c - b * b;
    EXPECT_NEAR(fr.crb_xy, (a + c) / det, 1e-12 * (a + c) / det);
}

TEST(Sensing, CrbPermutationInvariantAndMonotone)
{
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-100.0, 100.0), v(0.01, 10.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Position3 tgt{u(rng), u(rng), 0.0};
        MeasurementSet ms;
        for (int l = 0; l < 6; ++l)
        {
            const Position3 h{u(rng), u(rng), 50.0};
            const double d = distance(h, tgt);
            ms.push(h, d, d, v(rng));
        }
        const double crb = crb_or_infinity(ms, tgt.x, tgt.y);
        MeasurementSet rev;
        for (std::size_t l = ms.size(); l-- > 0;)
            rev.push(ms.hover_points[l], ms.true_distances[l], ms.measured_distances[l], ms.variances[l]);
        EXPECT_NEAR(crb_or_infinity(rev, tgt.x, tgt.y), crb, 1e-12 * crb);

        MeasurementSet more = ms;
        const Position3 h{u(rng), u(rng), 50.0};
        more.push(h, distance(h, tgt), distance(h, tgt), v(rng));
        EXPECT_LE(crb_or_infinity(more, tgt.x, tgt.y), crb * (1.0 + 1e-12));
    }
}

TEST(Sensing, FimIsAdditiveOverMeasurements)
{
    const Position3 tgt{10, 20, 0};
    const MeasurementSet a = noiseless({{50, 0, 50}, {-40, 10, 50}}, tgt, 0.5);
    const MeasurementSet b = noiseless({{0, 90, 50}, {-70, -60, 50}}, tgt, 2.0);
    MeasurementSet ab = a;
    for (std::size_t l = 0; l < b.size(); ++l)
        ab.push(b.hover_points[l], b.true_distances[l], b.measured_distances[l], b.variances[l]);
    const RMat sum = coordinate_fim(a, tgt.x, tgt.y).fim_coord + coordinate_fim(b, tgt.x, tgt.y).fim_coord;
    EXPECT_LT((coordinate_fim(ab, tgt.x, tgt.y).fim_coord - sum).norm(), 1e-12 * sum.norm());
}

TEST(Sensing, MleRecoversNoiselessTarget)
{
    const Position3 tgt{37.5, -12.25, 0};
    const MeasurementSet ms = noiseless({{0, 0, 50}, {80, 10, 50}, {-30, 70, 50}}, tgt, 1.0);
    const LocalizationResult r = mle_localize(ms, 100.0);
    EXPECT_NEAR(r.x, tgt.x, 1e-6);
    EXPECT_NEAR(r.y, tgt.y, 1e-6);
    EXPECT_FALSE(r.ambiguous);
}

TEST(Sensing, MleSingleHoverIsAmbiguous)
{
    MeasurementSet ms;
    ms.push({0, 0, 50}, 60.0, 60.0 + 0.5, 1.0);
    const LocalizationResult r = mle_localize(ms, 100.0);
    EXPECT_TRUE(r.ambiguous);
    EXPECT_NEAR(std::hypot(std::hypot(r.x, r.y), 50.0), 60.5, 1e-6);
}

TEST(Sensing, MleStaysInsideMap)
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    std::normal_distribution<double> n(0.0, 30.0);
    for (int trial = 0; trial < 50; ++trial)
    {
        const Position3 tgt{u(rng), u(rng), 0};
        MeasurementSet ms;
        for (int l = 0; l < 4; ++l)
        {
            const Position3 h{u(rng), u(rng), 50};
            const double d = distance(h, tgt);
            ms.push(h, d, std::max(1.0, d + n(rng)), 900.0);
        }
        const LocalizationResult r = mle_localize(ms, 100.0);
        EXPECT_LE(std::abs(r.x), 100.0);
        EXPECT_LE(std::abs(r.y), 100.0);
        double grid_best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 41; ++i)
            for (int j = 0; j < 41; ++j)
                grid_best = std::min(grid_best, mle_cost(ms, -100.0 + 5.0 * i, -100.0 + 5.0 * j));
        EXPECT_LE(r.cost, grid_best);
    }
}
