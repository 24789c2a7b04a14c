// Copyright 2026 The hexsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella header.

#include "hexsim/bench.hpp"
#include "hexsim/bp.hpp"
#include "hexsim/circuit.hpp"
#include "hexsim/clifford.hpp"
#include "hexsim/errors.hpp"
#include "hexsim/lattice.hpp"
#include "hexsim/oracle.hpp"
#include "hexsim/parallel.hpp"
#include "hexsim/pauli.hpp"
#include "hexsim/pauli_sum.hpp"
#include "hexsim/spd.hpp"
#include "hexsim/tensor.hpp"
#include "hexsim/tn.hpp"
