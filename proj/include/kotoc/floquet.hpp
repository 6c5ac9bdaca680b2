#pragma once

#include <memory>

#include "kotoc/core.hpp"

namespace kotoc {

/// Normalized N-fold tensor Hadamard transform, in place, on a length-2^N array.
/// Involutive and unitary; cost O(N 2^N).
template <typename Real>
void hadamard_transform(std::complex<Real>* data, std::int64_t dim) {
    for (std::int64_t h = 1; h < dim; h <<= 1) {
        for (std::int64_t i = 0; i < dim; i += h << 1) {
            for (std::int64_t j = i; j < i + h; ++j) {
                const auto a = data[j];
                const auto b = data[j + h];
                data[j] = a + b;
                data[j + h] = a - b;
            }
        }
    }
    const Real scale = Real(1) / std::sqrt(static_cast<Real>(dim));
    for (std::int64_t i = 0; i < dim; ++i) data[i] *= scale;
}

template <typename Derived>
void hadamard_transform(Eigen::MatrixBase<Derived>& columns) {
    for (Eigen::Index c = 0; c < columns.cols(); ++c) {
        hadamard_transform(columns.col(c).data(), columns.rows());
    }
}

/// Diagonal phase tables of one Floquet period in the z basis (zeta_l = +1 for bit 0).
/// kick:  phi_z(s) = h_z tau (N - 2 popcount(s))
/// ising: phi_x(s) = tau (J_x sum_l zeta_l zeta_{l+1} + h_x sum_l zeta_l)
RVector kick_phase_table(const SpinChainParams& params);
RVector ising_phase_table(const SpinChainParams& params);

/// Eigendecomposition U = E diag(exp(i theta)) E^dagger of a unitary matrix.
struct UnitaryEigen {
    RVector phases;   ///< ascending in (-pi, pi]
    CMatrix vectors;  ///< orthonormal columns
    double residual;  ///< max |U E - E diag(exp(i theta))|
};

/// Unitary eigensolver. Diagonalizes a Hermitian rotation of the real part of U and then
/// resolves clusters of coincident Hermitian eigenvalues by a Schur step on U restricted to
/// each cluster, so degenerate eigenspaces still receive orthonormal bases.
UnitaryEigen unitary_eigen(const CMatrix& u);

enum class Backend { MatrixFree, Dense, Spectral };

std::string to_string(Backend backend);

/// One Floquet period U = exp[-i tau (J_x H_xx + h_x H_x)] exp(-i tau h_z H_z).
///
/// The phase tables for the matrix-free route are always present. Dense and spectral
/// forms are attached by build_dense / spectral_decompose. Instances are immutable and
/// share their storage on copy.
class Propagator {
public:
    const SpinChainParams& params() const { return params_; }
    Backend backend() const { return backend_; }
    std::int64_t dim() const { return params_.dim(); }

    bool has_dense() const { return dense_ != nullptr; }
    bool has_spectral() const { return spectral_ != nullptr; }

    const CMatrix& dense() const;
    const RVector& eigenphases() const;
    const CMatrix& eigenvectors() const;

    const CVector& kick_phases() const { return *kick_; }
    const CVector& ising_phases() const { return *ising_; }

private:
    friend Propagator build_matrix_free(const SpinChainParams&);
    friend Propagator build_dense(const SpinChainParams&);
    friend Propagator spectral_decompose(const Propagator&);

    SpinChainParams params_;
    Backend backend_ = Backend::MatrixFree;
    std::shared_ptr<const CVector> kick_;
    std::shared_ptr<const CVector> ising_;
    std::shared_ptr<const CMatrix> dense_;
    std::shared_ptr<const UnitaryEigen> spectral_;
};

Propagator build_matrix_free(const SpinChainParams& params);

/// Dense 2^N x 2^N Floquet matrix (N <= kDenseCap).
Propagator build_dense(const SpinChainParams& params);

/// Attaches the eigendecomposition; throws DecompositionError if the reconstruction
/// residual exceeds 1e-8.
Propagator spectral_decompose(const Propagator& prop);

/// Which stored form of U an application uses. Auto takes the matrix-free tables.
enum class Route { Auto, MatrixFree, Dense, Spectral };

/// U psi, or U^dagger psi when `adjoint` is set.
CVector apply(const Propagator& prop, const CVector& psi, bool adjoint = false,
              Route route = Route::Auto);

/// In-place matrix-free U (or U^dagger) on a state.
void apply_in_place(const Propagator& prop, CVector& psi, bool adjoint = false);

/// In-place matrix-free U (or U^dagger) on every column of x.
void apply_columns(const Propagator& prop, CMatrix& x, bool adjoint = false);

}  // namespace kotoc
