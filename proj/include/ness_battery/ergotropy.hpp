// Copyright 2026 The ness-battery Authors
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

// ergotropy.hpp - maximal unitary work extraction and passive states.

#pragma once

#include <array>

#include "ness_battery/dynamics.hpp"
#include "ness_battery/linalg.hpp"
#include "ness_battery/model.hpp"

namespace ness_battery {

struct ErgotropyResult {
    double ergotropy = 0.0;
    // U = sum_j |E_j><r_j| with E ascending and r descending.
    ComplexMatrix optimal_unitary;
    // sum_j r_j |E_j><E_j|, equal to U rho U^dagger.
    DensityMatrix passive_state;
    std::array<double, 4> rho_eigenvalues_desc{};
};

// Ties in the spectrum of rho are paired with ascending energies in index
// order; the ergotropy value does not depend on the tie-break.
ErgotropyResult ergotropy(const DensityMatrix& rho, const ComplexMatrix& hamiltonian);

// 2 lambda (r_A - r_S) for energy-diagonal states with r_gg >= r_A >= r_S >= r_ee.
// Throws OrderingViolated otherwise.
double diagonal_ergotropy(const Populations& pops, const ModelParams& params);

// Populations non-increasing in energy (energy-basis diagonal of rho).
bool is_passive_diagonal(const Populations& pops, double tol = 0.0);

// The three S <-> A swapping gates, expressed in the energy basis:
// exp(-i (sz1 - sz2) pi/4) and the local exp(-i sz_k pi/2).
struct ExtractionUnitaries {
    ComplexMatrix two_qubit;
    ComplexMatrix local_1;
    ComplexMatrix local_2;
};

ExtractionUnitaries model_extraction_unitaries(const ModelParams& params);

// Tr[rho H] - Tr[U rho U^dagger H]. Throws NotUnitary if |U U^dagger - I| > 1e-10.
double extracted_work(const DensityMatrix& rho, const ComplexMatrix& unitary, const ComplexMatrix& hamiltonian);

} // namespace ness_battery
