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

#ifndef ARISISAC_SENSING_HPP
#define ARISISAC_SENSING_HPP

#include "arisisac/beamforming.hpp"
#include "arisisac/channel.hpp"
#include "arisisac/geometry.hpp"
#include "arisisac/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace arisisac
{
    struct SensingParams
    {
        double a_const = 3.5;               // a
        double g_p = 1e5;                   // processing gain, 0.1 B
        double noise_ap = 1e-14;            // sigma_s^2 [W]
        double total_power = 10.0;          // P_AP [W]
        double beta_s = 1.9952623149688e-5; // two-way reference gain

        void validate() const
        {
            if (!(a_const > 0.0))
                throw ConfigError("a", "must be > 0");
            if (!(g_p > 0.0))
                throw ConfigError("G_p", "must be > 0");
            if (!(noise_ap > 0.0))
                throw ConfigError("noise_ap", "must be > 0");
            if (!(total_power > 0.0))
                throw ConfigError("P_AP", "must be > 0");
            if (!(beta_s > 0.0))
                throw ConfigError("beta_s", "must be > 0");
        }
    };

    // Range measurements collected along a trajectory, one entry per hover point
    struct MeasurementSet
    {
        std::vector<Position3> hover_points;
        std::vector<double> true_distances;
        std::vector<double> measured_distances;
        std::vector<double> variances;

        std::size_t size() const { return hover_points.size(); }
        bool empty() const { return hover_points.empty(); }

        void push(const Position3 &hover, double true_d, double measured_d, double variance)
        {
            hover_points.push_back(hover);
            true_distances.push_back(true_d);
            measured_distances.push_back(measured_d);
            variances.push_back(variance);
        }
    };

    struct FisherResult
    {
        RMat fim_dist;   // L x L diagonal
        RMat jacobian;   // 2 x L, d(d)/d(x,y)
        RMat fim_coord;  // 2 x 2
        double crb_xy = std::numeric_limits<double>::infinity();
    };

    inline double variance_from_snr(double a_const, double snr) { return a_const / snr; }

    // Range variance a / SNR with SNR = P_AP G_p (beta_s / d^4) ||echo||^2 / (sigma_s^2 + interference).
    // `echo_norm_sq` is the squared norm of the unit-gain echo after receive beamforming.
    inline double measurement_variance(const SensingParams &p, double echo_norm_sq, double d, double interference = 0.0)
    {
        if (!(echo_norm_sq > 0.0))
            throw NoEcho("measurement_variance: zero echo");
        if (!(d > 0.0))
            throw DegenerateGeometry("measurement_variance: zero distance");
        const double d4 = d * d * d * d;
        const double snr = p.total_power * p.g_p * (p.beta_s / d4) * echo_norm_sq / (p.noise_ap + interference);
        return variance_from_snr(p.a_const, snr);
    }

    // ||G^T Phi^T A(theta_s) Phi G||_F^2 with the unit-gain response A = a a^H
    inline double unit_echo_norm_sq(const ChannelSet &ch, const CVec &phases)
    {
        const CVec v = target_receive_direction(ch, phases);                  // G^T Phi a
        const CVec t = receive_direction(ch, phases, ch.a_target.conjugate()); // (a^H Phi G)^T
        return v.squaredNorm() * t.squaredNorm();
    }

    // ||f^T G^T Phi^T A(theta_s) Phi G||^2
    inline double received_echo_norm_sq(const ChannelSet &ch, const CVec &phases, const CVec &f)
    {
        const CVec v = target_receive_direction(ch, phases);
        const CVec t = receive_direction(ch, phases, ch.a_target.conjugate());
        return std::norm(f.cwiseProduct(v).sum()) * t.squaredNorm();
    }

    // Variance of the slot's range measurement for the beamformers in `sol`.
    // An empty f_rx means an ideal matched receiver with no residual interference.
    inline double measurement_variance(const SensingParams &p, const ChannelSet &ch, const BeamformingSolution &sol, double d)
    {
        if (sol.f_rx.size() == 0)
            return measurement_variance(p, unit_echo_norm_sq(ch, sol.phases), d);
        return measurement_variance(p, received_echo_norm_sq(ch, sol.phases, sol.f_rx), d,
                                    residual_interference_power(ch, sol));
    }

    inline double sample_measurement(std::mt19937_64 &rng, double d, double variance)
    {
        if (!(variance > 0.0))
            return d;
        std::normal_distribution<double> noise(0.0, std::sqrt(variance));
        return d + noise(rng);
    }

    // Closed-form distance FIM: diag(1/sigma_l^2 + 8/d_l^2)
    inline RMat fim_distances(const MeasurementSet &ms)
    {
        const auto n = static_cast<Eigen::Index>(ms.size());
        RMat j = RMat::Zero(n, n);
        for (Eigen::Index l = 0; l < n; ++l)
        {
            const double d = ms.true_distances[l];
            j(l, l) = 1.0 / ms.variances[l] + 8.0 / (d * d);
        }
        return j;
    }

    // Condition number of a symmetric 2x2 matrix; +inf when not positive definite
    inline double condition_2x2(const RMat &j)
    {
        const double tr = j(0, 0) + j(1, 1);
        const double det = j(0, 0) * j(1, 1) - j(0, 1) * j(1, 0);
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        const double lmax = 0.5 * tr + disc;
        const double lmin = 0.5 * tr - disc;
        if (!(lmin > 0.0))
            return std::numeric_limits<double>::infinity();
        return lmax / lmin;
    }

    inline constexpr double max_fim_condition = 1e12;

    // Coordinate FIM Q J(d) Q^T and CRB_x + CRB_y, evaluated at `target` (z = 0).
    // Distances are recomputed at the evaluation point; variances are the recorded ones.
    inline FisherResult coordinate_fim(const MeasurementSet &ms, double target_x, double target_y)
    {
        const auto n = static_cast<Eigen::Index>(ms.size());
        MeasurementSet at_guess = ms;
        FisherResult res;
        res.jacobian = RMat::Zero(2, n);
        const Position3 tgt{target_x, target_y, 0.0};
        for (Eigen::Index l = 0; l < n; ++l)
        {
            const double d = distance(ms.hover_points[l], tgt);
            if (!(d > 0.0))
                throw DegenerateGeometry("coordinate_fim: target coincides with a hover point");
            at_guess.true_distances[l] = d;
            res.jacobian(0, l) = (target_x - ms.hover_points[l].x) / d;
            res.jacobian(1, l) = (target_y - ms.hover_points[l].y) / d;
        }
        res.fim_dist = fim_distances(at_guess);
        res.fim_coord = res.jacobian * res.fim_dist * res.jacobian.transpose();
        if (n == 0 || condition_2x2(res.fim_coord) > max_fim_condition)
            throw SingularGeometry("coordinate_fim: singular coordinate FIM");
        const RMat crb = res.fim_coord.inverse();
        res.crb_xy = crb(0, 0) + crb(1, 1);
        return res;
    }

    // CRB or +inf when the geometry is singular
    inline double crb_or_infinity(const MeasurementSet &ms, double target_x, double target_y)
    {
        try
        {
            return coordinate_fim(ms, target_x, target_y).crb_xy;
        }
        catch (const SingularGeometry &)
        {
            return std::numeric_limits<double>::infinity();
        }
        catch (const DegenerateGeometry &)
        {
            return std::numeric_limits<double>::infinity();
        }
    }

    struct MleOptions
    {
        int grid_points = 41;     // per axis over [-w_max, w_max]
        int max_iterations = 50;  // Gauss-Newton
        double tolerance = 1e-9;  // step length [m]
    };

    struct LocalizationResult
    {
        double x = 0.0;
        double y = 0.0;
        double cost = 0.0;
        int iterations = 0;
        bool ambiguous = false;
    };

    // Weighted least-squares range cost at (x, y, 0)
    inline double mle_cost(const MeasurementSet &ms, double x, double y)
    {
        double c = 0.0;
        const Position3 p{x, y, 0.0};
        for (std::size_t l = 0; l < ms.size(); ++l)
        {
            const double r = ms.measured_distances[l] - distance(ms.hover_points[l], p);
            c += r * r / ms.variances[l];
        }
        return c;
    }

    // Maximum likelihood ground-target position inside the map: coarse grid, then damped Gauss-Newton
    // with iterates projected onto the map.
    inline LocalizationResult mle_localize(const MeasurementSet &ms, double w_max, const MleOptions &opt = {})
    {
        if (ms.empty())
            throw Error("mle_localize: no measurements");
        LocalizationResult best;
        best.cost = std::numeric_limits<double>::infinity();
        const int g = std::max(2, opt.grid_points);
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j)
            {
                const double x = -w_max + 2.0 * w_max * i / (g - 1);
                const double y = -w_max + 2.0 * w_max * j / (g - 1);
                const double c = mle_cost(ms, x, y);
                if (c < best.cost)
                {
                    best.cost = c;
                    best.x = x;
                    best.y = y;
                }
            }

        const auto n = static_cast<Eigen::Index>(ms.size());
        Eigen::Matrix2d normal = Eigen::Matrix2d::Zero();
        for (int it = 0; it < opt.max_iterations; ++it)
        {
            RMat a(n, 2);
            RVec r(n);
            const Position3 p{best.x, best.y, 0.0};
            for (Eigen::Index l = 0; l < n; ++l)
            {
                const double rho = distance(ms.hover_points[l], p);
                const double s = std::sqrt(ms.variances[l]);
                if (!(rho > 0.0))
                {
                    a.row(l).setZero();
                    r[l] = 0.0;
                    continue;
                }
                a(l, 0) = (best.x - ms.hover_points[l].x) / (rho * s);
                a(l, 1) = (best.y - ms.hover_points[l].y) / (rho * s);
                r[l] = (ms.measured_distances[l] - rho) / s;
            }
            normal = a.transpose() * a;
            // Minimum-norm step, so rank-deficient geometries still converge along the observable direction
            const Eigen::Vector2d step = a.completeOrthogonalDecomposition().solve(r);
            double scale = 1.0;
            bool accepted = false;
            for (int h = 0; h < 30; ++h)
            {
                const double x = std::clamp(best.x + scale * step[0], -w_max, w_max);
                const double y = std::clamp(best.y + scale * step[1], -w_max, w_max);
                const double c = mle_cost(ms, x, y);
                if (c <= best.cost)
                {
                    best.x = x;
                    best.y = y;
                    best.cost = c;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            best.iterations = it + 1;
            if (!accepted || scale * step.norm() < opt.tolerance)
                break;
        }
        best.ambiguous = condition_2x2(normal) > max_fim_condition;
        return best;
    }
}

#endif
