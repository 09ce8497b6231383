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

#include "ness_battery/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ness_battery/error.hpp"

namespace ness_battery {

namespace {

constexpr double kHermitianTolerance = 1e-10;
constexpr int kMaxJacobiSweeps = 100;

void require_square(const ComplexMatrix& m, const char* what) {
    if (!m.is_square()) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + ": expected a square matrix, got " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": shape mismatch");
    }
}

// Unitary G = [[c, s], [-s*phase, c*phase]] acting on the (p, q) plane such
// that G^dagger [[a, b], [conj(b), d]] G is diagonal (a, d real, b != 0).
struct PlaneRotation {
    double c;
    double s;
    Complex phase;
    double t;
};

PlaneRotation jacobi_rotation(double a, double d, Complex b) {
    const double abs_b = std::abs(b);
    const double theta = (d - a) / (2.0 * abs_b);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    return {c, t * c, std::conj(b) / abs_b, t};
}

// m <- m G on columns p, q.
void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const PlaneRotation& g) {
    for (std::size_t k = 0; k < m.rows(); ++k) {
        const Complex x = m(k, p);
        const Complex y = m(k, q);
        m(k, p) = g.c * x - g.s * g.phase * y;
        m(k, q) = g.s * x + g.c * g.phase * y;
    }
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "expected " + std::to_string(rows_ * cols_) + " entries, got " +
                        std::to_string(data_.size()));
    }
    for (const auto& z : data_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorCode::NonFiniteEntry, "matrix entries must be finite");
        }
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

Complex ComplexMatrix::trace() const {
    require_square(*this, "trace");
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) sum += (*this)(i, i);
    return sum;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& z : data_) z *= scale;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix product: inner dimensions differ");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v) {
    if (m.cols() != v.size()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix-vector product: size mismatch");
    }
    ComplexVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex sum{0.0, 0.0};
        for (std::size_t j = 0; j < m.cols(); ++j) sum += m(i, j) * v[j];
        out[i] = sum;
    }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
    return worst;
}

double max_abs(const ComplexMatrix& m) {
    double worst = 0.0;
    for (const auto& z : m.entries()) worst = std::max(worst, std::abs(z));
    return worst;
}

double frobenius_norm(const ComplexMatrix& m) {
    double sum = 0.0;
    for (const auto& z : m.entries()) sum += std::norm(z);
    return std::sqrt(sum);
}

double one_norm(const ComplexMatrix& m) {
    double best = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double col = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) col += std::abs(m(r, c));
        best = std::max(best, col);
    }
    return best;
}

double vector_norm(std::span<const Complex> v) {
    double sum = 0.0;
    for (const auto& z : v) sum += std::norm(z);
    return std::sqrt(sum);
}

double hermiticity_error(const ComplexMatrix& m) {
    require_square(m, "hermiticity_error");
    double worst = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = r; c < m.cols(); ++c)
            worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
    return worst;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const Complex x = a(ia, ja);
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    out(ia * b.rows() + ib, ja * b.cols() + jb) = x * b(ib, jb);
        }
    return out;
}

EigenSystem eig_hermitian(const ComplexMatrix& m) {
    require_square(m, "eig_hermitian");
    if (hermiticity_error(m) > kHermitianTolerance) {
        throw Error(ErrorCode::NotHermitian, "eig_hermitian: input is not Hermitian");
    }
    const std::size_t n = m.rows();
    ComplexMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        a(r, r) = m(r, r).real();
        for (std::size_t c = r + 1; c < n; ++c) {
            a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
            a(c, r) = std::conj(a(r, c));
        }
    }
    ComplexMatrix v = ComplexMatrix::identity(n);

    bool converged = false;
    for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::abs(a(p, q));
        if (off == 0.0) {
            converged = true;
            break;
        }
        // Skip small rotations during the first sweeps, as in the classic
        // cyclic Jacobi; afterwards elements that no longer perturb the
        // diagonal are flushed to zero.
        const double threshold = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double abs_pq = std::abs(a(p, q));
                const double g = 100.0 * abs_pq;
                if (sweep > 3 && std::abs(app) + g == std::abs(app) && std::abs(aqq) + g == std::abs(aqq)) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                if (abs_pq == 0.0 || abs_pq <= threshold) continue;

                const PlaneRotation rot = jacobi_rotation(app, aqq, a(p, q));
                rotate_columns(a, p, q, rot);
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    a(p, k) = std::conj(a(k, p));
                    a(q, k) = std::conj(a(k, q));
                }
                a(p, p) = app - rot.t * abs_pq;
                a(q, q) = aqq + rot.t * abs_pq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                rotate_columns(v, p, q, rot);
            }
        }
    }
    if (!converged) {
        throw Error(ErrorCode::NoConvergence, "eig_hermitian: Jacobi sweep budget exhausted");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenSystem out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = a(order[i], order[i]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, i) = v(r, order[i]);
    }
    return out;
}

ComplexMatrix expm(const ComplexMatrix& m) {
    require_square(m, "expm");
    const std::size_t n = m.rows();
    const double norm = one_norm(m);
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const ComplexMatrix scaled = std::ldexp(1.0, -squarings) * m;

    constexpr int kTaylorDegree = 18;
    const ComplexMatrix id = ComplexMatrix::identity(n);
    ComplexMatrix result = id + scaled * Complex(1.0 / kTaylorDegree);
    for (int k = kTaylorDegree - 1; k >= 1; --k) {
        result = id + (scaled * result) * Complex(1.0 / k);
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

ComplexVector vectorize(const ComplexMatrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw Error(ErrorCode::DimensionMismatch, "vectorize: expected a 4x4 matrix");
    }
    ComplexVector v(16);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 4; ++i) v[i + 4 * j] = rho(i, j);
    return v;
}

ComplexMatrix devectorize(std::span<const Complex> v) {
    if (v.size() != 16) {
        throw Error(ErrorCode::DimensionMismatch, "devectorize: expected a length-16 vector");
    }
    ComplexMatrix rho(4, 4);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 4; ++i) rho(i, j) = v[i + 4 * j];
    return rho;
}

SingularValueDecomposition svd_right(const ComplexMatrix& m) {
    require_square(m, "svd_right");
    const std::size_t n = m.rows();
    ComplexMatrix w = m;
    ComplexMatrix v = ComplexMatrix::identity(n);

    bool converged = false;
    for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                Complex gamma{0.0, 0.0};
                for (std::size_t k = 0; k < n; ++k) {
                    alpha += std::norm(w(k, p));
                    beta += std::norm(w(k, q));
                    gamma += std::conj(w(k, p)) * w(k, q);
                }
                if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || std::abs(gamma) == 0.0) continue;
                const PlaneRotation rot = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(w, p, q, rot);
                rotate_columns(v, p, q, rot);
                rotated = true;
            }
        }
        converged = !rotated;
    }
    if (!converged) {
        throw Error(ErrorCode::NoConvergence, "svd_right: one-sided Jacobi sweep budget exhausted");
    }

    std::vector<double> sigma(n);
    for (std::size_t c = 0; c < n; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < n; ++r) sum += std::norm(w(r, c));
        sigma[c] = std::sqrt(sum);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] < sigma[j]; });

    SingularValueDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = sigma[order[i]];
        for (std::size_t r = 0; r < n; ++r) out.right_vectors(r, i) = v(r, order[i]);
    }
    return out;
}

std::vector<ComplexVector> nullspace(const ComplexMatrix& m, double tol) {
    const SingularValueDecomposition svd = svd_right(m);
    const double sigma_max = svd.values.empty() ? 0.0 : svd.values.back();
    std::vector<ComplexVector> basis;
    for (std::size_t i = 0; i < svd.values.size(); ++i) {
        if (svd.values[i] > tol * sigma_max) break;
        ComplexVector col(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r) col[r] = svd.right_vectors(r, i);
        basis.push_back(std::move(col));
    }
    return basis;
}

double spectral_norm(const ComplexMatrix& m) {
    const SingularValueDecomposition svd = svd_right(m);
    return svd.values.empty() ? 0.0 : svd.values.back();
}

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    require_same_shape(rho, sigma, "trace_distance");
    require_square(rho, "trace_distance");
    if (hermiticity_error(rho) > kHermitianTolerance || hermiticity_error(sigma) > kHermitianTolerance) {
        throw Error(ErrorCode::NotHermitian, "trace_distance: inputs must be Hermitian");
    }
    const EigenSystem es = eig_hermitian(rho - sigma);
    double sum = 0.0;
    for (double x : es.values) sum += std::abs(x);
    return 0.5 * sum;
}

} // namespace ness_battery
