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

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace udnsim {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration values.
class config_error : public error {
public:
    using error::error;
};

// Operand shapes do not match.
class dimension_error : public error {
public:
    using error::error;
};

// A value precondition (not a shape) is violated.
class precondition_error : public error {
public:
    using error::error;
};

// Poisson sampling produced an empty AP or user set after all retries.
class degenerate_topology_error : public error {
public:
    using error::error;
};

// Cholesky hit a non-positive pivot; `pivot` is its index.
class factorization_error : public error {
public:
    factorization_error(const std::string& msg, int pivot_index)
        : error(msg), pivot(pivot_index) {}
    int pivot;
};

// Krylov recurrence broke down (zero or negative curvature).
class breakdown_error : public error {
public:
    using error::error;
};

// Vertices with no path to any seeded vertex.
class unreachable_vertex_error : public error {
public:
    unreachable_vertex_error(const std::string& msg, std::vector<int> verts)
        : error(msg), vertices(std::move(verts)) {}
    std::vector<int> vertices;
};

class io_error : public error {
public:
    using error::error;
};

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_finite(const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

// Euclidean norm, accumulated in index order.
inline double norm2(std::span<const cplx> v) {
    double s = 0.0;
    for (const cplx& x : v) s += x.real() * x.real() + x.imag() * x.imag();
    return std::sqrt(s);
}

inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace udnsim
