/*
 *   Copyright 2026 the udnsim authors
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

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "udnsim/common.hpp"

namespace udnsim {

namespace detail {
inline double conj_of(double x) { return x; }
inline cplx conj_of(const cplx& x) { return std::conj(x); }
inline double real_of(double x) { return x; }
inline double real_of(const cplx& x) { return x.real(); }
inline double abs2(double x) { return x * x; }
inline double abs2(const cplx& x) { return x.real() * x.real() + x.imag() * x.imag(); }
}  // namespace detail

// Row-major dense square-or-rectangular matrix of double or cplx.
template <typename Scalar>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), Scalar{}) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Scalar& operator()(int i, int j) {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                     static_cast<std::size_t>(j)];
    }
    const Scalar& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) +
                     static_cast<std::size_t>(j)];
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Scalar> data_;
};

using DenseComplexMatrix = DenseMatrix<cplx>;
using DenseRealMatrix = DenseMatrix<double>;

// L L^H factorization of a self-adjoint positive-definite matrix. Reads the
// lower triangle only. Factor once, solve many right-hand sides.
template <typename Scalar>
class CholeskyFactor {
public:
    explicit CholeskyFactor(const DenseMatrix<Scalar>& m) : n_(m.rows()), l_(m.rows(), m.cols()) {
        if (m.rows() != m.cols())
            throw dimension_error("cholesky: matrix not square");
        for (int j = 0; j < n_; ++j) {
            double d = detail::real_of(m(j, j));
            for (int k = 0; k < j; ++k) d -= detail::abs2(l_(j, k));
            if (!(d > 0.0) || !std::isfinite(d))
                throw factorization_error(
                    "cholesky: non-positive pivot at index " + std::to_string(j), j);
            const double ljj = std::sqrt(d);
            l_(j, j) = Scalar(ljj);
            for (int i = j + 1; i < n_; ++i) {
                Scalar s = m(i, j);
                for (int k = 0; k < j; ++k) s -= l_(i, k) * detail::conj_of(l_(j, k));
                l_(i, j) = s / ljj;
            }
        }
    }

    int size() const { return n_; }

    std::vector<Scalar> solve(std::span<const Scalar> b) const {
        if (static_cast<int>(b.size()) != n_)
            throw dimension_error("cholesky solve: rhs length mismatch");
        std::vector<Scalar> x(b.begin(), b.end());
        // L w = b
        for (int i = 0; i < n_; ++i) {
            Scalar s = x[static_cast<std::size_t>(i)];
            for (int k = 0; k < i; ++k) s -= l_(i, k) * x[static_cast<std::size_t>(k)];
            x[static_cast<std::size_t>(i)] = s / detail::real_of(l_(i, i));
        }
        // L^H x = w
        for (int i = n_ - 1; i >= 0; --i) {
            Scalar s = x[static_cast<std::size_t>(i)];
            for (int k = i + 1; k < n_; ++k)
                s -= detail::conj_of(l_(k, i)) * x[static_cast<std::size_t>(k)];
            x[static_cast<std::size_t>(i)] = s / detail::real_of(l_(i, i));
        }
        return x;
    }

private:
    int n_;
    DenseMatrix<Scalar> l_;
};

// Solves M x = b for self-adjoint positive-definite M. The deviation from
// M = M^H must stay below 1e-12 relative to the largest entry.
template <typename Scalar>
std::vector<Scalar> hermitian_solve(const DenseMatrix<Scalar>& m, std::span<const Scalar> b) {
    if (m.rows() != m.cols()) throw dimension_error("hermitian_solve: matrix not square");
    double scale = 1.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            scale = std::max(scale, std::sqrt(detail::abs2(m(i, j))));
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j <= i; ++j) {
            const Scalar diff = m(i, j) - detail::conj_of(m(j, i));
            if (std::sqrt(detail::abs2(diff)) > 1e-12 * scale)
                throw precondition_error("hermitian_solve: matrix not Hermitian at (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
    return CholeskyFactor<Scalar>(m).solve(b);
}

}  // namespace udnsim
