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

#ifndef ARISISAC_GEOMETRY_HPP
#define ARISISAC_GEOMETRY_HPP

#include "arisisac/types.hpp"

#include <algorithm>
#include <cmath>

namespace arisisac
{
    // Node position in meters; z is altitude above ground
    struct Position3
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;

        bool valid() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z) && z >= 0.0; }
        bool operator==(const Position3 &) const = default;
    };

    // Horizontal velocity in m/s
    struct Velocity2
    {
        double vx = 0.0;
        double vy = 0.0;

        bool operator==(const Velocity2 &) const = default;
    };

    struct MapSpec
    {
        double w_max = 100.0;   // half side length of the square flight area [m]
        double altitude = 50.0; // fixed ARIS altitude H [m]
        double delta_t = 1.0;   // slot duration [s]
        int total_slots = 12;   // slots per episode

        bool valid() const { return w_max > 0.0 && altitude >= 0.0 && delta_t > 0.0 && total_slots >= 1; }
    };

    inline Position3 advance(const Position3 &p, const Velocity2 &v, double delta_t)
    {
        return {p.x + v.vx * delta_t, p.y + v.vy * delta_t, p.z};
    }

    // Closed square [-w_max, w_max]^2
    inline bool in_bounds(const Position3 &p, const MapSpec &map)
    {
        return p.x >= -map.w_max && p.x <= map.w_max && p.y >= -map.w_max && p.y <= map.w_max;
    }

    inline double distance(const Position3 &a, const Position3 &b)
    {
        return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
    }

    // Each component clamped independently to [-v_max, v_max]
    inline Velocity2 clamp_velocity(const Velocity2 &v, double v_max)
    {
        return {std::clamp(v.vx, -v_max, v_max), std::clamp(v.vy, -v_max, v_max)};
    }

    // Sine of the direction of `node` seen from the RIS, whose element axis is the global x-axis.
    inline double doa_sine(const Position3 &aris, const Position3 &node)
    {
        const double d = distance(aris, node);
        if (!(d > 0.0))
            throw DegenerateGeometry("doa_sine: coincident points");
        return std::clamp((node.x - aris.x) / d, -1.0, 1.0);
    }
}

#endif
