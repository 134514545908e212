/**
 * Copyright 2026 The mmqpt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "mmqpt/circuit.hpp"
#include "mmqpt/circuit_dsl.hpp"
#include "mmqpt/error.hpp"
#include "mmqpt/fitting.hpp"
#include "mmqpt/fock.hpp"
#include "mmqpt/gate_model.hpp"
#include "mmqpt/meas_matrix.hpp"
#include "mmqpt/nelder_mead.hpp"
#include "mmqpt/synth.hpp"
#include "mmqpt/tomography.hpp"
#include "mmqpt/version.hpp"
#include "mmqpt/wavepacket.hpp"
