// Copyright 2026 The bsap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

/// @file bsap.hpp
/// Umbrella header.

#include "bsap/adiabatic.hpp"
#include "bsap/circuit.hpp"
#include "bsap/eigensolve.hpp"
#include "bsap/errors.hpp"
#include "bsap/experiment.hpp"
#include "bsap/mcvqe.hpp"
#include "bsap/models.hpp"
#include "bsap/pauli.hpp"
#include "bsap/statevector.hpp"
#include "bsap/subspace.hpp"
