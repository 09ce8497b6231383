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

#include "ness_battery/ergotropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ness_battery/error.hpp"

namespace ness_battery {

namespace {

ComplexMatrix conjugate(const ComplexMatrix& u, const ComplexMatrix& rho) { return u * rho * u.adjoint(); }

} // namespace

ErgotropyResult ergotropy(const DensityMatrix& rho, const ComplexMatrix& hamiltonian) {
    if (!hamiltonian.is_square() || hamiltonian.rows() != 4) {
        throw Error(ErrorCode::DimensionMismatch, "ergotropy: Hamiltonian must be 4x4");
    }
    if (hermiticity_error(hamiltonian) > 1e-10) {
        throw Error(ErrorCode::NotHermitian, "ergotropy: Hamiltonian is not Hermitian");
    }
    const EigenSystem energies = eig_hermitian(hamiltonian);
    const EigenSystem spectrum = eig_hermitian(rho.matrix());

    // Descending populations; equal eigenvalues keep their index order.
    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return spectrum.values[i] > spectrum.values[j]; });

    ErgotropyResult out{0.0, ComplexMatrix(4, 4), DensityMatrix::assume_valid(ComplexMatrix(4, 4)), {}};
    ComplexMatrix passive(4, 4);
    double passive_energy = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        const std::size_t k = order[j];
        const double r = spectrum.values[k];
        out.rho_eigenvalues_desc[j] = r;
        passive_energy += r * energies.values[j];
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = 0; b < 4; ++b) {
                out.optimal_unitary(a, b) += energies.vectors(a, j) * std::conj(spectrum.vectors(b, k));
                passive(a, b) += r * energies.vectors(a, j) * std::conj(energies.vectors(b, j));
            }
        }
    }
    out.passive_state = DensityMatrix::assume_valid(std::move(passive));
    out.ergotropy = std::max(0.0, rho.energy(hamiltonian) - passive_energy);
    return out;
}

double diagonal_ergotropy(const Populations& pops, const ModelParams& params) {
    if (!(pops.r_gg >= pops.r_A && pops.r_A >= pops.r_S && pops.r_S >= pops.r_ee)) {
        throw Error(ErrorCode::OrderingViolated, "populations do not satisfy r_gg >= r_A >= r_S >= r_ee");
    }
    return 2.0 * params.lambda * (pops.r_A - pops.r_S);
}

bool is_passive_diagonal(const Populations& pops, double tol) {
    return pops.r_gg + tol >= pops.r_S && pops.r_S + tol >= pops.r_A && pops.r_A + tol >= pops.r_ee;
}

ExtractionUnitaries model_extraction_unitaries(const ModelParams& /*params*/) {
    using namespace pauli;
    const double quarter = std::numbers::pi / 4.0;
    const double half = std::numbers::pi / 2.0;
    const ComplexMatrix z1 = on_qubit(1, z());
    const ComplexMatrix z2 = on_qubit(2, z());
    const Complex minus_i(0.0, -1.0);
    return {
        to_energy_basis(expm(minus_i * quarter * (z1 - z2))),
        to_energy_basis(expm(minus_i * half * z1)),
        to_energy_basis(expm(minus_i * half * z2)),
    };
}

double extracted_work(const DensityMatrix& rho, const ComplexMatrix& unitary, const ComplexMatrix& hamiltonian) {
    if (unitary.rows() != 4 || unitary.cols() != 4) {
        throw Error(ErrorCode::DimensionMismatch, "extracted_work: unitary must be 4x4");
    }
    if (max_abs_diff(unitary * unitary.adjoint(), ComplexMatrix::identity(4)) > 1e-10) {
        throw Error(ErrorCode::NotUnitary, "extracted_work: operator is not unitary");
    }
    const ComplexMatrix after = conjugate(unitary, rho.matrix());
    return rho.energy(hamiltonian) - (after * hamiltonian).trace().real();
}

} // namespace ness_battery
