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

#ifndef QCD_NUMKERNEL_HPP
#define QCD_NUMKERNEL_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-9;
inline constexpr double kPsd = 1e-9;
inline constexpr double kTrace = 1e-9;
inline constexpr double kNorm = 1e-9;
inline constexpr double kRecon = 1e-10;
}  // namespace tol

/// Largest matrix side any operation may produce unless told otherwise.
inline constexpr std::size_t kDefaultDimCap = 4096;

// Error hierarchy shared by every module.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// A matrix side would exceed the configured cap.
struct SizeError : Error {
    using Error::Error;
};
/// Operand dimensions do not fit together.
struct ShapeError : Error {
    using Error::Error;
};
/// Input outside an operation's mathematical domain (non-Hermitian, not PSD, ...).
struct DomainError : Error {
    using Error::Error;
};
/// A result failed a self-check that can only fail through a bug.
struct InternalConsistencyError : Error {
    using Error::Error;
};

bool all_finite(const ComplexMatrix &x);

/// Largest entry of |x - x^dagger|.
double hermitian_defect(const ComplexMatrix &x);

/// Throws SizeError if a side of length `dim` exceeds `cap`.
void check_dim_cap(std::size_t dim, std::size_t cap, const char *what);

/// Kronecker product a (x) b.
ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b, std::size_t cap = kDefaultDimCap);

/// Traces out every factor of `dims` not listed in `keep`; the kept factors
/// appear in the order given by `keep`.
ComplexMatrix partial_trace(
    const ComplexMatrix &x, std::span<const std::size_t> dims, std::span<const std::size_t> keep);

struct Spectrum {
    RealVector values;      // descending
    ComplexMatrix vectors;  // orthonormal columns, matching `values`
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized first.
Spectrum spectral(const ComplexMatrix &h);

/// Singular values in descending order, min(rows, cols) of them.
RealVector singular_values(const ComplexMatrix &x);

/// Principal square root of a PSD matrix. Eigenvalues in [-tol_psd, 0) are
/// clamped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix &p);

/// Hermitian PSD trace-one matrix of power-of-two side.
class DensityMatrix {
   public:
    /// Validates the invariants and throws DomainError/ShapeError on failure.
    explicit DensityMatrix(ComplexMatrix mat);

    /// |psi><psi|.
    static DensityMatrix pure(const ComplexVector &psi);
    static DensityMatrix basis(std::size_t qubits, std::size_t index);
    static DensityMatrix maximally_mixed(std::size_t qubits);

    const ComplexMatrix &mat() const {
        return mat_;
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(mat_.rows());
    }
    std::size_t qubits() const;

   private:
    ComplexMatrix mat_;
};

/// Unit vector.
class StateVector {
   public:
    explicit StateVector(ComplexVector amplitudes);

    /// Rescales a nonzero vector to unit norm.
    static StateVector normalized(const ComplexVector &v);

    const ComplexVector &amplitudes() const {
        return amp_;
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(amp_.size());
    }
    ComplexMatrix projector() const {
        return amp_ * amp_.adjoint();
    }

   private:
    ComplexVector amp_;
};

/// Number of qubits n with 2^n == dim, or throws ShapeError.
std::size_t qubits_for_dim(std::size_t dim);

}  // namespace qcd

#endif
