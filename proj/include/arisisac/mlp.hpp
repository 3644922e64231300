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

#ifndef ARISISAC_MLP_HPP
#define ARISISAC_MLP_HPP

#include "arisisac/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace arisisac
{
    enum class OutputActivation
    {
        linear,
        tanh
    };

    struct DenseLayer
    {
        RMat w; // out x in
        RVec b; // out
    };

    // Fully connected network with ReLU hidden layers. Inputs and outputs are column-major batches
    // (features x batch). Parameters are ordered layer by layer, weights (column-major) before biases.
    class Mlp
    {
    public:
        struct Cache
        {
            std::vector<RMat> inputs; // input of every layer
            std::vector<RMat> pre;    // pre-activation of every layer
        };

        Mlp() = default;

        // Hidden layers use fan-in uniform initialization; the output layer uses U(-final_init, final_init).
        Mlp(int in, const std::vector<int> &hidden, int out, OutputActivation act, std::mt19937_64 &rng,
            double final_init = 3e-3)
            : act_(act)
        {
            if (in < 1 || out < 1)
                throw ShapeMismatch("Mlp: input and output sizes must be >= 1");
            std::vector<int> sizes{in};
            for (int h : hidden)
            {
                if (h < 1)
                    throw ShapeMismatch("Mlp: hidden sizes must be >= 1");
                sizes.push_back(h);
            }
            sizes.push_back(out);
            for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
            {
                const bool last = l + 2 == sizes.size();
                const double bound = last ? final_init : 1.0 / std::sqrt(static_cast<double>(sizes[l]));
                std::uniform_real_distribution<double> u(-bound, bound);
                DenseLayer layer{RMat(sizes[l + 1], sizes[l]), RVec(sizes[l + 1])};
                for (Eigen::Index j = 0; j < layer.w.cols(); ++j)
                    for (Eigen::Index i = 0; i < layer.w.rows(); ++i)
                        layer.w(i, j) = u(rng);
                for (Eigen::Index i = 0; i < layer.b.size(); ++i)
                    layer.b[i] = u(rng);
                layers_.push_back(std::move(layer));
            }
        }

        Eigen::Index input_size() const { return layers_.empty() ? 0 : layers_.front().w.cols(); }
        Eigen::Index output_size() const { return layers_.empty() ? 0 : layers_.back().w.rows(); }
        OutputActivation output_activation() const { return act_; }
        const std::vector<DenseLayer> &layers() const { return layers_; }

        std::vector<int> hidden_sizes() const
        {
            std::vector<int> h;
            for (std::size_t l = 0; l + 1 < layers_.size(); ++l)
                h.push_back(static_cast<int>(layers_[l].w.rows()));
            return h;
        }

        Eigen::Index num_params() const
        {
            Eigen::Index n = 0;
            for (const auto &l : layers_)
                n += l.w.size() + l.b.size();
            return n;
        }

        RMat forward(const RMat &x) const
        {
            Cache c;
            return forward(x, c);
        }

        RMat forward(const RMat &x, Cache &cache) const
        {
            if (x.rows() != input_size())
                throw ShapeMismatch("Mlp::forward: input has " + std::to_string(x.rows()) + " rows, expected " +
                                    std::to_string(input_size()));
            cache.inputs.clear();
            cache.pre.clear();
            RMat a = x;
            for (std::size_t l = 0; l < layers_.size(); ++l)
            {
                cache.inputs.push_back(a);
                RMat z = layers_[l].w * a;
                z.colwise() += layers_[l].b;
                cache.pre.push_back(z);
                if (l + 1 < layers_.size())
                    a = z.cwiseMax(0.0);
                else
                    a = act_ == OutputActivation::tanh ? RMat(z.array().tanh()) : z;
            }
            return a;
        }

        // Parameter gradient for dL/d(output) = grad_out; optionally dL/d(input)
        RVec backward(const Cache &cache, const RMat &grad_out, RMat *grad_in = nullptr) const
        {
            if (cache.pre.size() != layers_.size())
                throw ShapeMismatch("Mlp::backward: cache does not match the network");
            RVec grad(num_params());
            Eigen::Index offset = num_params();
            RMat delta = grad_out;
            for (std::size_t l = layers_.size(); l-- > 0;)
            {
                const RMat &z = cache.pre[l];
                if (l + 1 == layers_.size())
                {
                    if (act_ == OutputActivation::tanh)
                        delta = delta.cwiseProduct(RMat(1.0 - z.array().tanh().square()));
                }
                else
                {
                    delta = delta.cwiseProduct(RMat((z.array() > 0.0).cast<double>()));
                }
                const RMat gw = delta * cache.inputs[l].transpose();
                const RVec gb = delta.rowwise().sum();
                offset -= gw.size() + gb.size();
                grad.segment(offset, gw.size()) = Eigen::Map<const RVec>(gw.data(), gw.size());
                grad.segment(offset + gw.size(), gb.size()) = gb;
                delta = layers_[l].w.transpose() * delta;
            }
            if (grad_in != nullptr)
                *grad_in = delta;
            return grad;
        }

        RVec flat() const
        {
            RVec p(num_params());
            Eigen::Index o = 0;
            for (const auto &l : layers_)
            {
                p.segment(o, l.w.size()) = Eigen::Map<const RVec>(l.w.data(), l.w.size());
                o += l.w.size();
                p.segment(o, l.b.size()) = l.b;
                o += l.b.size();
            }
            return p;
        }

        void set_flat(const RVec &p)
        {
            if (p.size() != num_params())
                throw ShapeMismatch("Mlp::set_flat: expected " + std::to_string(num_params()) + " parameters, got " +
                                    std::to_string(p.size()));
            Eigen::Index o = 0;
            for (auto &l : layers_)
            {
                Eigen::Map<RVec>(l.w.data(), l.w.size()) = p.segment(o, l.w.size());
                o += l.w.size();
                l.b = p.segment(o, l.b.size());
                o += l.b.size();
            }
        }

        bool same_shape(const Mlp &other) const
        {
            if (layers_.size() != other.layers_.size() || act_ != other.act_)
                return false;
            for (std::size_t l = 0; l < layers_.size(); ++l)
                if (layers_[l].w.rows() != other.layers_[l].w.rows() || layers_[l].w.cols() != other.layers_[l].w.cols())
                    return false;
            return true;
        }

    private:
        std::vector<DenseLayer> layers_;
        OutputActivation act_ = OutputActivation::linear;
    };

    // Adam on a flat parameter vector
    class Adam
    {
    public:
        explicit Adam(double lr = 3e-4, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
            : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps)
        {
        }

        void step(RVec &params, const RVec &grad)
        {
            if (grad.size() != params.size())
                throw ShapeMismatch("Adam::step: gradient size mismatch");
            if (m_.size() != params.size())
            {
                m_ = RVec::Zero(params.size());
                v_ = RVec::Zero(params.size());
                t_ = 0;
            }
            ++t_;
            m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
            v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseAbs2();
            const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
            const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
            params.array() -= lr_ * (m_.array() / c1) / ((v_.array() / c2).sqrt() + eps_);
        }

        double learning_rate() const { return lr_; }
        long steps() const { return t_; }

    private:
        double lr_, beta1_, beta2_, eps_;
        RVec m_, v_;
        long t_ = 0;
    };

    // target <- tau * source + (1 - tau) * target
    inline void soft_update(Mlp &target, const Mlp &source, double tau)
    {
        if (!target.same_shape(source))
            throw ShapeMismatch("soft_update: network shapes differ");
        target.set_flat(tau * source.flat() + (1.0 - tau) * target.flat());
    }
}

#endif
