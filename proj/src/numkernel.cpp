// Copyright 2026 The qcd Authors
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

#include "qcd/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qcd {

bool all_finite(const ComplexMatrix &x) {
    for (Eigen::Index j = 0; j < x.cols(); j++) {
        for (Eigen::Index i = 0; i < x.rows(); i++) {
            if (!std::isfinite(x(i, j).real()) || !std::isfinite(x(i, j).imag())) {
                return false;
            }
        }
    }
    return true;
}

double hermitian_defect(const ComplexMatrix &x) {
    if (x.rows() != x.cols()) {
        throw ShapeError("hermitian_defect: matrix is not square");
    }
    if (x.size() == 0) {
        return 0;
    }
    return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

void check_dim_cap(std::size_t dim, std::size_t cap, const char *what) {
    if (dim > cap) {
        throw SizeError(
            std::string(what) + ": dimension " + std::to_string(dim) + " exceeds cap " + std::to_string(cap));
    }
}

std::size_t qubits_for_dim(std::size_t dim) {
    if (dim == 0 || (dim & (dim - 1)) != 0) {
        throw ShapeError("dimension " + std::to_string(dim) + " is not a power of two");
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) {
        n++;
    }
    return n;
}

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b, std::size_t cap) {
    auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
    auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
    check_dim_cap(std::max(rows, cols), cap, "tensor");
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix partial_trace(
    const ComplexMatrix &x, std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
    if (x.rows() != x.cols()) {
        throw ShapeError("partial_trace: matrix is not square");
    }
    std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (total != static_cast<std::size_t>(x.rows())) {
        throw ShapeError(
            "partial_trace: subsystem dims multiply to " + std::to_string(total) + " but matrix side is " +
            std::to_string(x.rows()));
    }
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        if (k >= dims.size() || kept[k]) {
            throw ShapeError("partial_trace: bad or repeated keep index " + std::to_string(k));
        }
        kept[k] = true;
    }
    std::vector<std::size_t> traced;
    for (std::size_t i = 0; i < dims.size(); i++) {
        if (!kept[i]) {
            traced.push_back(i);
        }
    }

    // Row-major strides of the full index.
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) {
        stride[i - 1] = stride[i] * dims[i];
    }

    auto offsets_for = [&](std::span<const std::size_t> factors) {
        std::size_t count = 1;
        for (auto f : factors) {
            count *= dims[f];
        }
        std::vector<std::size_t> offs(count, 0);
        for (std::size_t idx = 0; idx < count; idx++) {
            std::size_t rem = idx;
            std::size_t off = 0;
            for (std::size_t p = factors.size(); p-- > 0;) {
                auto f = factors[p];
                off += (rem % dims[f]) * stride[f];
                rem /= dims[f];
            }
            offs[idx] = off;
        }
        return offs;
    };

    auto keep_off = offsets_for(keep);
    auto trace_off = offsets_for(traced);
    auto n = static_cast<Eigen::Index>(keep_off.size());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; j++) {
        for (Eigen::Index i = 0; i < n; i++) {
            Complex acc = 0;
            for (auto t : trace_off) {
                acc += x(static_cast<Eigen::Index>(keep_off[i] + t), static_cast<Eigen::Index>(keep_off[j] + t));
            }
            out(i, j) = acc;
        }
    }
    return out;
}

namespace {

double scale_of(const ComplexMatrix &x) {
    return x.size() == 0 ? 1.0 : std::max(1.0, x.cwiseAbs().maxCoeff());
}

}  // namespace

Spectrum spectral(const ComplexMatrix &h) {
    if (h.rows() != h.cols()) {
        throw ShapeError("spectral: matrix is not square");
    }
    if (!all_finite(h)) {
        throw DomainError("spectral: non-finite entries");
    }
    if (hermitian_defect(h) > tol::kHermitian * scale_of(h)) {
        throw DomainError("spectral: matrix is not Hermitian");
    }
    ComplexMatrix sym = (h + h.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw InternalConsistencyError("spectral: eigensolver failed");
    }
    // Eigen sorts ascending; flip.
    Spectrum s;
    s.values = solver.eigenvalues().reverse();
    s.vectors = solver.eigenvectors().rowwise().reverse();
    return s;
}

RealVector singular_values(const ComplexMatrix &x) {
    if (!all_finite(x)) {
        throw DomainError("singular_values: non-finite entries");
    }
    if (x.size() == 0) {
        return RealVector(0);
    }
    Eigen::BDCSVD<ComplexMatrix> svd(x);
    return svd.singularValues();
}

ComplexMatrix psd_sqrt(const ComplexMatrix &p) {
    auto s = spectral(p);
    RealVector root(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); i++) {
        double v = s.values[i];
        if (v < -tol::kPsd * scale_of(p)) {
            throw DomainError("psd_sqrt: eigenvalue " + std::to_string(v) + " is significantly negative");
        }
        root[i] = v > 0 ? std::sqrt(v) : 0.0;
    }
    return s.vectors * root.asDiagonal() * s.vectors.adjoint();
}

DensityMatrix::DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {
    if (mat_.rows() != mat_.cols()) {
        throw ShapeError("density matrix is not square");
    }
    qubits_for_dim(static_cast<std::size_t>(mat_.rows()));
    if (!all_finite(mat_)) {
        throw DomainError("density matrix has non-finite entries");
    }
    if (hermitian_defect(mat_) > tol::kHermitian) {
        throw DomainError("density matrix is not Hermitian");
    }
    if (std::abs(mat_.trace() - Complex(1.0)) > tol::kTrace) {
        throw DomainError("density matrix trace is not one");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver((mat_ + mat_.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol::kPsd) {
        throw DomainError("density matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::pure(const ComplexVector &psi) {
    return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::basis(std::size_t qubits, std::size_t index) {
    auto d = static_cast<Eigen::Index>(std::size_t{1} << qubits);
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1;
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t qubits) {
    auto d = static_cast<Eigen::Index>(std::size_t{1} << qubits);
    return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

std::size_t DensityMatrix::qubits() const {
    return qubits_for_dim(dim());
}

StateVector::StateVector(ComplexVector amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() == 0) {
        throw ShapeError("state vector is empty");
    }
    if (!all_finite(amp_)) {
        throw DomainError("state vector has non-finite entries");
    }
    if (std::abs(amp_.norm() - 1.0) > tol::kNorm) {
        throw DomainError("state vector is not normalized");
    }
}

StateVector StateVector::normalized(const ComplexVector &v) {
    double n = v.norm();
    if (!(n > 0)) {
        throw DomainError("cannot normalize a zero vector");
    }
    return StateVector(v / n);
}

}  // namespace qcd
