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

// linalg.hpp - dense complex linear algebra for the 4x4 state space and the
// 16x16 superoperator space.
//
// Vectorization convention (project-wide): column stacking,
//   vec(rho)[i + n*j] = rho(i, j),  so  vec(A rho B) = kron(B^T, A) vec(rho).

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ness_battery {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    // Zero matrix.
    ComplexMatrix(std::size_t rows, std::size_t cols);
    // Row-major entries; throws NonFiniteEntry / DimensionMismatch.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix diagonal(std::span<const Complex> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Complex> entries() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    Complex trace() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, Complex s);
ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v);

// Largest |entry| of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m);
double one_norm(const ComplexMatrix& m);
double vector_norm(std::span<const Complex> v);
// max |m - m^dagger|
double hermiticity_error(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenSystem {
    std::vector<double> values; // ascending
    ComplexMatrix vectors;      // column i pairs with values[i]
};

// Cyclic complex Jacobi. Throws NotHermitian above 1e-10 asymmetry and
// NoConvergence if the sweep budget runs out.
EigenSystem eig_hermitian(const ComplexMatrix& m);

// Scaling and squaring with a degree-18 Taylor kernel.
ComplexMatrix expm(const ComplexMatrix& m);

ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix devectorize(std::span<const Complex> v);

struct SingularValueDecomposition {
    std::vector<double> values; // ascending
    ComplexMatrix right_vectors; // column i pairs with values[i]
};

// One-sided Jacobi SVD of a square matrix (right singular vectors only).
SingularValueDecomposition svd_right(const ComplexMatrix& m);

// Orthonormal basis of { v : sigma(v) <= tol * sigma_max }, smallest
// singular value first.
std::vector<ComplexVector> nullspace(const ComplexMatrix& m, double tol);

// Largest singular value.
double spectral_norm(const ComplexMatrix& m);

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

} // namespace ness_battery
