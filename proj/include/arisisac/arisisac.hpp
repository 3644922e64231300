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

#ifndef ARISISAC_ARISISAC_HPP
#define ARISISAC_ARISISAC_HPP

#include "arisisac/types.hpp"
#include "arisisac/geometry.hpp"
#include "arisisac/channel.hpp"
#include "arisisac/beamforming.hpp"
#include "arisisac/sensing.hpp"
#include "arisisac/environment.hpp"
#include "arisisac/mlp.hpp"
#include "arisisac/agent.hpp"
#include "arisisac/config.hpp"
#include "arisisac/experiment.hpp"

#endif
