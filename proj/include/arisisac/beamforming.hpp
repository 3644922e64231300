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

#ifndef ARISISAC_BEAMFORMING_HPP
#define ARISISAC_BEAMFORMING_HPP

#include "arisisac/channel.hpp"
#include "arisisac/types.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

namespace arisisac
{
    struct LinkBudget
    {
        double noise_user = 1e-13;     // sigma_k^2 [W]
        double noise_ap = 1e-14;       // sigma_s^2 [W]
        double sinr_threshold = 10.0;  // Gamma_th, linear
        double total_power = 10.0;     // P_AP [W]

        void validate() const
        {
            if (!(noise_user > 0.0))
                throw ConfigError("noise_user", "must be > 0");
            if (!(noise_ap > 0.0))
                throw ConfigError("noise_ap", "must be > 0");
            if (!(sinr_threshold > 0.0))
                throw ConfigError("sinr_threshold", "must be > 0");
            if (!(total_power > 0.0))
                throw ConfigError("P_AP", "must be > 0");
        }
    };

    struct BeamformingSolution
    {
        std::vector<CVec> w;       // per-user transmit beamformers (M)
        CMat r_s;                  // sensing covariance (M x M), rank one
        CVec sensing_beam;         // w_s with r_s = w_s w_s^H
        CVec phases;               // RIS reflection coefficients (N), unit modulus
        CVec f_rx;                 // receive beamformer (M), unit norm
        std::vector<double> sinr;  // achieved SINR per user, linear
        bool feasible = false;

        double sensing_power() const { return r_s.size() ? r_s.trace().real() : 0.0; }
        double total_power() const
        {
            double p = sensing_power();
            for (const auto &wk : w)
                p += wk.squaredNorm();
            return p;
        }
    };

    struct SolverOptions
    {
        int alignment_sweeps = 10; // coordinate passes of the target alignment
        int repair_sweeps = 20;    // maximum passes of the SINR repair
        int phase_candidates = 16; // phases tried per element during repair
    };

    // h_k = G^H Phi^H h_k^U
    inline CVec effective_user_channel(const ChannelSet &ch, const CVec &phases, std::size_t k)
    {
        return ch.g_ap_ris.adjoint() * phases.conjugate().cwiseProduct(ch.h_ris_user.at(k));
    }

    // G^T Phi^T a : direction at the AP of an echo returned through the RIS from steering `a`
    inline CVec receive_direction(const ChannelSet &ch, const CVec &phases, const CVec &a)
    {
        return ch.g_ap_ris.transpose() * phases.cwiseProduct(a);
    }

    inline CVec target_receive_direction(const ChannelSet &ch, const CVec &phases)
    {
        return receive_direction(ch, phases, ch.a_target);
    }

    // SINR of user k: desired over inter-user, sensing leakage and noise
    inline double sinr(const BeamformingSolution &sol, const ChannelSet &ch, const LinkBudget &budget, std::size_t k)
    {
        const CVec h = effective_user_channel(ch, sol.phases, k);
        const double desired = std::norm(h.dot(sol.w.at(k)));
        double interference = 0.0;
        for (std::size_t i = 0; i < sol.w.size(); ++i)
            if (i != k)
                interference += std::norm(h.dot(sol.w[i]));
        if (sol.r_s.size())
            interference += (h.adjoint() * sol.r_s * h)(0, 0).real();
        return desired / (interference + budget.noise_user);
    }

    // Unit-modulus phases maximizing ||G^T Phi a_target||: projected principal direction, then coordinate ascent.
    inline CVec align_phases_to_target(const ChannelSet &ch, int sweeps = 10)
    {
        const Eigen::Index n_el = ch.num_ris_elements();
        const CMat b = ch.g_ap_ris.transpose() * ch.a_target.asDiagonal(); // M x N, v = b * phases
        CVec phases = CVec::Ones(n_el);
        Eigen::JacobiSVD<CMat> svd(b, Eigen::ComputeThinV);
        if (svd.singularValues().size() > 0 && svd.singularValues()[0] > 0.0)
        {
            const CVec x = svd.matrixV().col(0);
            for (Eigen::Index n = 0; n < n_el; ++n)
                phases[n] = std::abs(x[n]) > 0.0 ? x[n] / std::abs(x[n]) : cplx(1.0, 0.0);
        }
        CVec v = b * phases;
        for (int s = 0; s < sweeps; ++s)
        {
            const double before = v.squaredNorm();
            for (Eigen::Index n = 0; n < n_el; ++n)
            {
                const CVec rest = v - phases[n] * b.col(n);
                const cplx proj = b.col(n).dot(rest); // b_n^H rest
                if (std::abs(proj) == 0.0)
                    continue;
                const cplx best = proj / std::abs(proj);
                v = rest + best * b.col(n);
                phases[n] = best;
            }
            if (v.squaredNorm() - before <= 1e-14 * v.squaredNorm())
                break;
        }
        return phases;
    }

    namespace detail
    {
        // Zero-forcing directions and gains for the effective channels in the columns of h (M x K).
        struct ZeroForcing
        {
            std::vector<CVec> directions; // unit norm
            std::vector<double> gains;    // |h_k^H w_k|^2 per unit power
            bool ok = false;
        };

        inline ZeroForcing zero_forcing(const CMat &h)
        {
            ZeroForcing zf;
            const Eigen::Index k = h.cols();
            if (k == 0)
            {
                zf.ok = true;
                return zf;
            }
            if (k > h.rows())
                return zf;
            const CMat gram = h.adjoint() * h;
            Eigen::SelfAdjointEigenSolver<CMat> eig(gram);
            const RVec ev = eig.eigenvalues();
            if (!(ev.maxCoeff() > 0.0) || ev.minCoeff() <= 1e-12 * ev.maxCoeff())
                return zf;
            const CMat gram_inv = eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().adjoint();
            const CMat w = h * gram_inv;
            for (Eigen::Index i = 0; i < k; ++i)
            {
                const double nrm2 = gram_inv(i, i).real();
                zf.directions.push_back(w.col(i) / std::sqrt(nrm2));
                zf.gains.push_back(1.0 / nrm2);
            }
            zf.ok = true;
            return zf;
        }

        inline CMat user_channel_matrix(const ChannelSet &ch, const CVec &phases)
        {
            CMat h(ch.num_ap_antennas(), static_cast<Eigen::Index>(ch.num_users()));
            for (std::size_t k = 0; k < ch.num_users(); ++k)
                h.col(static_cast<Eigen::Index>(k)) = effective_user_channel(ch, phases, k);
            return h;
        }

        // Ratio of the zero-forcing power needed without sensing to P_AP; +inf when ZF is impossible.
        inline double power_requirement(const ChannelSet &ch, const CVec &phases, const LinkBudget &budget)
        {
            const ZeroForcing zf = zero_forcing(user_channel_matrix(ch, phases));
            if (!zf.ok)
                return std::numeric_limits<double>::infinity();
            double p = 0.0;
            for (double g : zf.gains)
                p += budget.sinr_threshold * budget.noise_user / g;
            return p / budget.total_power;
        }

        inline CVec sensing_direction(const ChannelSet &ch, const CVec &phases)
        {
            const CVec v = target_receive_direction(ch, phases);
            const double n = v.norm();
            if (!(n > 0.0))
                throw NoEcho("sensing_direction: zero target path gain");
            return v.conjugate() / n;
        }
    }

    inline CVec matched_receive_beamformer(const ChannelSet &ch, const CVec &phases)
    {
        return detail::sensing_direction(ch, phases);
    }

    // Transmit beamformers and sensing covariance for fixed RIS phases.
    // ZF toward the users with per-user power giving SINR = Gamma_th exactly (sensing leakage included),
    // remainder to a rank-one sensing covariance.
    inline BeamformingSolution allocate_beamformers(const ChannelSet &ch, const CVec &phases, const LinkBudget &budget)
    {
        budget.validate();
        const Eigen::Index m = ch.num_ap_antennas();
        const std::size_t k_users = ch.num_users();

        BeamformingSolution sol;
        sol.phases = phases;
        const CVec u = detail::sensing_direction(ch, phases);
        sol.f_rx = u;

        const CMat h = detail::user_channel_matrix(ch, phases);
        const detail::ZeroForcing zf = detail::zero_forcing(h);
        const double gamma = budget.sinr_threshold;
        const double noise = budget.noise_user;
        const double p_total = budget.total_power;

        double required = 0.0;
        if (zf.ok)
            for (double g : zf.gains)
                required += gamma * noise / g;

        double p_rem = 0.0;
        std::vector<double> power(k_users, 0.0);
        std::vector<CVec> dirs;
        if (zf.ok && required < p_total)
        {
            // p_k c_k = gamma (P_rem s_k + noise), P_rem = P - sum p_k
            double sum_b = 0.0, sum_e = 0.0;
            std::vector<double> s(k_users);
            for (std::size_t k = 0; k < k_users; ++k)
            {
                s[k] = std::norm(h.col(static_cast<Eigen::Index>(k)).dot(u));
                sum_b += gamma * s[k] / zf.gains[k];
                sum_e += gamma * (s[k] * p_total + noise) / zf.gains[k];
            }
            const double used = sum_e / (1.0 + sum_b);
            p_rem = std::max(0.0, p_total - used);
            for (std::size_t k = 0; k < k_users; ++k)
                power[k] = gamma * (s[k] * p_rem + noise) / zf.gains[k];
            dirs = zf.directions;
            sol.feasible = true;
        }
        else if (zf.ok)
        {
            // over budget: scale the sensing-free ZF powers down to P_AP
            for (std::size_t k = 0; k < k_users; ++k)
                power[k] = gamma * noise / zf.gains[k] * (p_total / required);
            dirs = zf.directions;
        }
        else
        {
            // ZF impossible: matched filters with equal power
            for (std::size_t k = 0; k < k_users; ++k)
            {
                const CVec hk = h.col(static_cast<Eigen::Index>(k));
                const double n = hk.norm();
                dirs.push_back(n > 0.0 ? CVec(hk / n) : CVec(CVec::Zero(m)));
                power[k] = p_total / static_cast<double>(k_users);
            }
        }

        for (std::size_t k = 0; k < k_users; ++k)
            sol.w.push_back(std::sqrt(power[k]) * dirs[k]);
        sol.sensing_beam = std::sqrt(p_rem) * u;
        sol.r_s = sol.sensing_beam * sol.sensing_beam.adjoint();
        for (std::size_t k = 0; k < k_users; ++k)
            sol.sinr.push_back(sinr(sol, ch, budget, k));
        return sol;
    }

    // Phases for the target, greedily repaired until the SINR constraints become feasible.
    inline CVec repair_phases(const ChannelSet &ch, CVec phases, const LinkBudget &budget, const SolverOptions &opt)
    {
        double ratio = detail::power_requirement(ch, phases, budget);
        const Eigen::Index n_el = phases.size();
        for (int sweep = 0; sweep < opt.repair_sweeps && !(ratio < 1.0); ++sweep)
        {
            bool improved = false;
            for (Eigen::Index n = 0; n < n_el && !(ratio < 1.0); ++n)
            {
                const cplx current = phases[n];
                cplx best = current;
                for (int q = 0; q < opt.phase_candidates; ++q)
                {
                    phases[n] = std::polar(1.0, 2.0 * pi * q / opt.phase_candidates);
                    const double r = detail::power_requirement(ch, phases, budget);
                    if (r < ratio)
                    {
                        ratio = r;
                        best = phases[n];
                        improved = true;
                    }
                }
                phases[n] = best;
            }
            if (!improved)
                break;
        }
        return phases;
    }

    // Per-slot inner solver: target-aligned phases, SINR repair when needed, ZF plus sensing allocation.
    inline BeamformingSolution optimize_phases_and_beamformers(const ChannelSet &ch, const LinkBudget &budget,
                                                               const SolverOptions &opt = {})
    {
        CVec phases = align_phases_to_target(ch, opt.alignment_sweeps);
        if (ch.num_users() > 0 && !(detail::power_requirement(ch, phases, budget) < 1.0))
            phases = repair_phases(ch, phases, budget, opt);
        return allocate_beamformers(ch, phases, budget);
    }

    // Interference columns of the NSP: SI of every transmit beam, then clutter echo directions
    inline CMat interference_columns(const ChannelSet &ch, const BeamformingSolution &sol)
    {
        const Eigen::Index m = ch.num_ap_antennas();
        const std::size_t k_users = ch.num_users();
        CMat c(m, static_cast<Eigen::Index>(2 * k_users + 1));
        Eigen::Index col = 0;
        for (const auto &wk : sol.w)
            c.col(col++) = ch.g_si * wk;
        c.col(col++) = sol.sensing_beam.size() ? CVec(ch.g_si * sol.sensing_beam) : CVec(CVec::Zero(m));
        for (const auto &ak : ch.a_clutter)
            c.col(col++) = receive_direction(ch, sol.phases, ak);
        return c.leftCols(col);
    }

    // Orthonormal basis of span(C); columns are normalized first, cutoff 1e-12 sigma_max.
    inline CMat interference_basis(const CMat &c)
    {
        std::vector<Eigen::Index> keep;
        for (Eigen::Index j = 0; j < c.cols(); ++j)
            if (c.col(j).norm() > 0.0)
                keep.push_back(j);
        if (keep.empty())
            return CMat(c.rows(), 0);
        CMat cn(c.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j)
            cn.col(static_cast<Eigen::Index>(j)) = c.col(keep[j]).normalized();
        Eigen::JacobiSVD<CMat> svd(cn, Eigen::ComputeThinU);
        const RVec sv = svd.singularValues();
        Eigen::Index rank = 0;
        while (rank < sv.size() && sv[rank] > 1e-12 * sv[0])
            ++rank;
        return svd.matrixU().leftCols(rank);
    }

    // Closed-form NSP receive beamformer: conj((I - C C^+) v) / ||.||, v = G^T Phi^T a(theta_s)
    inline CVec nsp_receive_beamformer(const ChannelSet &ch, const BeamformingSolution &sol)
    {
        const CVec v = target_receive_direction(ch, sol.phases);
        const double vn = v.norm();
        if (!(vn > 0.0))
            throw NoEcho("nsp_receive_beamformer: zero target path gain");
        const CMat basis = interference_basis(interference_columns(ch, sol));
        CVec proj = v;
        if (basis.cols() > 0)
            proj -= basis * (basis.adjoint() * v);
        const double pn = proj.norm();
        if (!(pn > 1e-8 * vn))
            throw NspDegenerate("nsp_receive_beamformer: target direction inside interference subspace");
        return proj.conjugate() / pn;
    }

    // Sum of all transmit covariances
    inline CMat transmit_covariance(const BeamformingSolution &sol, Eigen::Index m)
    {
        CMat r = sol.r_s.size() ? sol.r_s : CMat(CMat::Zero(m, m));
        for (const auto &wk : sol.w)
            r += wk * wk.adjoint();
        return r;
    }

    // Clutter echo plus SI operator acting on the transmit signal (M x M)
    inline CMat interference_operator(const ChannelSet &ch, const CVec &phases)
    {
        CMat hc = CMat::Zero(ch.num_ris_elements(), ch.num_ris_elements());
        for (std::size_t k = 0; k < ch.a_clutter.size(); ++k)
            hc += ch.alpha_clutter[k] * (ch.a_clutter[k] * ch.a_clutter[k].adjoint());
        const CMat phi = phases.asDiagonal();
        return ch.g_ap_ris.transpose() * phi * hc * phi * ch.g_ap_ris + ch.g_si;
    }

    // Power of the SI plus clutter component after the receive beamformer f_rx
    inline double residual_interference_power(const ChannelSet &ch, const BeamformingSolution &sol)
    {
        const CMat op = interference_operator(ch, sol.phases);
        const CMat rx = transmit_covariance(sol, ch.num_ap_antennas());
        const Eigen::RowVectorXcd r = sol.f_rx.transpose() * op;
        return std::max(0.0, (r * rx * r.adjoint())(0, 0).real());
    }

    // Same interference summed over all AP antennas before receive beamforming
    inline double pre_beamforming_interference_power(const ChannelSet &ch, const BeamformingSolution &sol)
    {
        const CMat op = interference_operator(ch, sol.phases);
        const CMat rx = transmit_covariance(sol, ch.num_ap_antennas());
        return std::max(0.0, (op * rx * op.adjoint()).trace().real());
    }
}

#endif
