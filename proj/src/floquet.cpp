#include "kotoc/floquet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "kotoc/error.hpp"

namespace kotoc {

namespace {

constexpr double kPi = std::numbers::pi;

int zeta(std::uint64_t s, int n_sites, int site) {
    return (s & site_mask(n_sites, site)) ? -1 : 1;
}

CVector phase_factors(const RVector& phases) {
    CVector out(phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) out[i] = std::polar(1.0, -phases[i]);
    return out;
}

void matrix_free_apply(const Propagator& prop, Complex* x, bool adjoint) {
    const std::int64_t dim = prop.dim();
    const Complex* kick = prop.kick_phases().data();
    const Complex* ising = prop.ising_phases().data();
    if (!adjoint) {
        for (std::int64_t i = 0; i < dim; ++i) x[i] *= kick[i];
        hadamard_transform(x, dim);
        for (std::int64_t i = 0; i < dim; ++i) x[i] *= ising[i];
        hadamard_transform(x, dim);
    } else {
        hadamard_transform(x, dim);
        for (std::int64_t i = 0; i < dim; ++i) x[i] *= std::conj(ising[i]);
        hadamard_transform(x, dim);
        for (std::int64_t i = 0; i < dim; ++i) x[i] *= std::conj(kick[i]);
    }
}

double canonical_phase(Complex z) {
    const double theta = std::arg(z);
    return theta <= -kPi ? kPi : theta;
}

}  // namespace

RVector kick_phase_table(const SpinChainParams& params) {
    const std::int64_t dim = params.dim();
    RVector phi(dim);
    for (std::int64_t s = 0; s < dim; ++s) {
        const int up_minus_down = params.n_sites - 2 * std::popcount(static_cast<std::uint64_t>(s));
        phi[s] = params.h_z * params.tau * up_minus_down;
    }
    return phi;
}

RVector ising_phase_table(const SpinChainParams& params) {
    const int n = params.n_sites;
    const std::int64_t dim = params.dim();
    RVector phi(dim);
    for (std::int64_t s = 0; s < dim; ++s) {
        const auto bits = static_cast<std::uint64_t>(s);
        int bonds = 0;
        int field = 0;
        for (int l = 1; l <= n; ++l) {
            field += zeta(bits, n, l);
            if (l < n) bonds += zeta(bits, n, l) * zeta(bits, n, l + 1);
        }
        phi[s] = params.tau * (params.j_x * bonds + params.h_x * field);
    }
    return phi;
}

UnitaryEigen unitary_eigen(const CMatrix& u) {
    if (u.rows() != u.cols()) throw DimensionError("unitary_eigen needs a square matrix");
    const Eigen::Index n = u.rows();
    // Rotation angle keeps the Hermitian part generic for spectra on rational grids.
    const Complex rot = std::polar(1.0, -0.6180339887498949);
    CMatrix herm = 0.5 * (rot * u + std::conj(rot) * u.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm);
    if (solver.info() != Eigen::Success) {
        throw DecompositionError("Hermitian eigensolver did not converge", -1.0);
    }
    herm.resize(0, 0);
    CMatrix vectors = solver.eigenvectors();
    const RVector& values = solver.eigenvalues();
    const CMatrix uv = u * vectors;
    const CMatrix projected = vectors.adjoint() * uv;

    constexpr double cluster_gap = 1e-7;
    RVector phases(n);
    for (Eigen::Index start = 0; start < n;) {
        Eigen::Index stop = start + 1;
        while (stop < n && values[stop] - values[stop - 1] < cluster_gap) ++stop;
        const Eigen::Index m = stop - start;
        if (m == 1) {
            phases[start] = canonical_phase(projected(start, start));
        } else {
            Eigen::ComplexSchur<CMatrix> schur(projected.block(start, start, m, m));
            if (schur.info() != Eigen::Success) {
                throw DecompositionError("Schur step on a degenerate cluster failed", -1.0);
            }
            vectors.middleCols(start, m) = vectors.middleCols(start, m) * schur.matrixU();
            for (Eigen::Index k = 0; k < m; ++k) {
                phases[start + k] = canonical_phase(schur.matrixT()(k, k));
            }
        }
        start = stop;
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return phases[a] < phases[b]; });
    UnitaryEigen out;
    out.phases.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.phases[k] = phases[order[static_cast<std::size_t>(k)]];
        out.vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
    }
    CMatrix lhs = u * out.vectors;
    for (Eigen::Index k = 0; k < n; ++k) {
        lhs.col(k) -= std::polar(1.0, out.phases[k]) * out.vectors.col(k);
    }
    out.residual = n > 0 ? lhs.cwiseAbs().maxCoeff() : 0.0;
    return out;
}

std::string to_string(Backend backend) {
    switch (backend) {
        case Backend::MatrixFree: return "matrix-free";
        case Backend::Dense: return "dense";
        case Backend::Spectral: return "spectral";
    }
    return "unknown";
}

const CMatrix& Propagator::dense() const {
    if (!dense_) throw Error("propagator has no dense form; call build_dense");
    return *dense_;
}

const RVector& Propagator::eigenphases() const {
    if (!spectral_) throw Error("propagator has no spectral form; call spectral_decompose");
    return spectral_->phases;
}

const CMatrix& Propagator::eigenvectors() const {
    if (!spectral_) throw Error("propagator has no spectral form; call spectral_decompose");
    return spectral_->vectors;
}

Propagator build_matrix_free(const SpinChainParams& params) {
    validate(params, kMatrixFreeCap);
    Propagator prop;
    prop.params_ = params;
    prop.backend_ = Backend::MatrixFree;
    prop.kick_ = std::make_shared<const CVector>(phase_factors(kick_phase_table(params)));
    prop.ising_ = std::make_shared<const CVector>(phase_factors(ising_phase_table(params)));
    return prop;
}

Propagator build_dense(const SpinChainParams& params) {
    validate(params, kDenseCap);
    Propagator prop = build_matrix_free(params);
    // Columns of U = R D_x R D_z, evaluated exactly through the Hadamard conjugation.
    auto u = std::make_shared<CMatrix>(CMatrix::Identity(prop.dim(), prop.dim()));
    apply_columns(prop, *u);
    prop.dense_ = std::move(u);
    prop.backend_ = Backend::Dense;
    return prop;
}

Propagator spectral_decompose(const Propagator& prop) {
    if (!prop.has_dense()) throw Error("spectral_decompose needs a dense propagator");
    auto eig = std::make_shared<UnitaryEigen>(unitary_eigen(prop.dense()));
    if (!(eig->residual <= 1e-8)) {
        throw DecompositionError("Floquet eigendecomposition inaccurate", eig->residual);
    }
    Propagator out = prop;
    out.spectral_ = std::move(eig);
    out.backend_ = Backend::Spectral;
    return out;
}

CVector apply(const Propagator& prop, const CVector& psi, bool adjoint, Route route) {
    if (psi.size() != prop.dim()) {
        throw DimensionError("state of size " + std::to_string(psi.size()) +
                             " does not match propagator dimension " + std::to_string(prop.dim()));
    }
    switch (route) {
        case Route::Auto:
        case Route::MatrixFree: {
            CVector out = psi;
            matrix_free_apply(prop, out.data(), adjoint);
            return out;
        }
        case Route::Dense:
            return adjoint ? CVector(prop.dense().adjoint() * psi) : CVector(prop.dense() * psi);
        case Route::Spectral: {
            const CMatrix& e = prop.eigenvectors();
            CVector coeff = e.adjoint() * psi;
            const double sign = adjoint ? -1.0 : 1.0;
            for (Eigen::Index k = 0; k < coeff.size(); ++k) {
                coeff[k] *= std::polar(1.0, sign * prop.eigenphases()[k]);
            }
            return e * coeff;
        }
    }
    throw Error("unknown route");
}

void apply_in_place(const Propagator& prop, CVector& psi, bool adjoint) {
    if (psi.size() != prop.dim()) throw DimensionError("state does not match propagator");
    matrix_free_apply(prop, psi.data(), adjoint);
}

void apply_columns(const Propagator& prop, CMatrix& x, bool adjoint) {
    if (x.rows() != prop.dim()) throw DimensionError("operand rows do not match propagator");
    for (Eigen::Index c = 0; c < x.cols(); ++c) matrix_free_apply(prop, x.col(c).data(), adjoint);
}

}  // namespace kotoc
