#include <doctest.h>

#include <numbers>

#include "kotoc/error.hpp"
#include "kotoc/floquet.hpp"
#include "oracles.hpp"

using namespace kotoc;

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix identity(Eigen::Index d) { return CMatrix::Identity(d, d); }

CMatrix power(const CMatrix& u, int k) {
    CMatrix out = identity(u.rows());
    for (int i = 0; i < k; ++i) out = u * out;
    return out;
}

/// prod_l sigma^z_l in the z basis: (-1)^popcount(s).
CMatrix z_parity(int n) {
    const Eigen::Index d = Eigen::Index{1} << n;
    CMatrix p = CMatrix::Zero(d, d);
    for (Eigen::Index s = 0; s < d; ++s) p(s, s) = (std::popcount(static_cast<std::uint64_t>(s)) % 2) ? -1.0 : 1.0;
    return p;
}

}  // namespace

TEST_CASE("Hadamard transform is an involution") {
    oracle::Gen g(1);
    CVector psi = oracle::random_state(64, g);
    const CVector orig = psi;
    hadamard_transform(psi.data(), psi.size());
    CHECK(std::abs(psi.norm() - 1.0) < 1e-13);
    hadamard_transform(psi.data(), psi.size());
    CHECK(oracle::max_abs(psi - orig) < 1e-14);
}

TEST_CASE("dense propagator matches explicit matrix exponentials") {
    oracle::Gen g(2024);
    for (int trial = 0; trial < 5; ++trial) {
        for (int n : {2, 4}) {
            const auto p = oracle::random_params(n, g);
            const CMatrix u = build_dense(p).dense();
            CHECK(oracle::max_abs(u - oracle::floquet_reference(p)) < 1e-8);
        }
    }
}

TEST_CASE("factor order: Ising factor on the left of the kick") {
    const SpinChainParams p{4, 0.9, 0.7, 1.3, 0.4};
    const auto h = oracle::chain_hamiltonians(4);
    const CMatrix ising = oracle::expm_hermitian(p.j_x * h.h_xx + p.h_x * h.h_x, p.tau);
    const CMatrix kick = oracle::expm_hermitian(p.h_z * h.h_z, p.tau);
    const CMatrix u = build_dense(p).dense();
    CHECK(oracle::max_abs(u - ising * kick) < 1e-8);
    CHECK(oracle::max_abs(u - kick * ising) > 1e-3);
}

TEST_CASE("dense propagator is unitary") {
    oracle::Gen g(7);
    for (int n : {2, 4, 6, 8}) {
        const CMatrix u = build_dense(oracle::random_params(n, g)).dense();
        CHECK(oracle::max_abs(u.adjoint() * u - identity(u.rows())) <= 1e-10);
    }
}

TEST_CASE("kick factor at tau h_z = pi is (-1)^N") {
    for (int n : {2, 4, 6}) {
        const SpinChainParams p{n, 1.0, 4.0, 4.0, kPi / 4};
        const auto prop = build_matrix_free(p);
        const double sign = n % 2 ? -1.0 : 1.0;
        for (Eigen::Index s = 0; s < prop.dim(); ++s) {
            REQUIRE(std::abs(prop.kick_phases()[s] - Complex(sign, 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("matrix-free and dense applications agree") {
    oracle::Gen g(8);
    const auto prop = build_dense(oracle::random_params(8, g));
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const CVector psi = oracle::random_state(prop.dim(), g);
        worst = std::max(worst, oracle::max_abs(kotoc::apply(prop, psi) - kotoc::apply(prop, psi, false, Route::Dense)));
        worst = std::max(worst, oracle::max_abs(kotoc::apply(prop, psi, true) - kotoc::apply(prop, psi, true, Route::Dense)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("apply then adjoint returns the input; norms are preserved") {
    oracle::Gen g(9);
    for (int n : {2, 6, 10, 14}) {
        const auto prop = build_matrix_free(oracle::random_params(n, g));
        const CVector psi = oracle::random_state(prop.dim(), g);
        const CVector out = kotoc::apply(prop, psi);
        CHECK(std::abs(out.norm() - 1.0) < 1e-10);
        CHECK(oracle::max_abs(kotoc::apply(prop, out, true) - psi) < 1e-10);
    }
}

TEST_CASE("spectral form reconstructs the dense propagator") {
    oracle::Gen g(10);
    for (int n : {4, 8}) {
        const auto prop = spectral_decompose(build_dense(oracle::random_params(n, g)));
        const CMatrix& e = prop.eigenvectors();
        const RVector& theta = prop.eigenphases();
        CVector phase(theta.size());
        for (Eigen::Index k = 0; k < theta.size(); ++k) phase[k] = std::polar(1.0, theta[k]);
        CHECK(oracle::max_abs(e * phase.asDiagonal() * e.adjoint() - prop.dense()) <= 1e-8);
        CHECK(oracle::max_abs(e.adjoint() * e - identity(e.cols())) <= 1e-10);
        for (Eigen::Index k = 0; k < theta.size(); ++k) {
            REQUIRE(theta[k] > -kPi);
            REQUIRE(theta[k] <= kPi);
            if (k) REQUIRE(theta[k - 1] <= theta[k]);
        }
        const CVector psi = oracle::random_state(prop.dim(), g);
        CHECK(oracle::max_abs(kotoc::apply(prop, psi, false, Route::Spectral) - kotoc::apply(prop, psi)) < 1e-9);
        CHECK(oracle::max_abs(kotoc::apply(prop, psi, true, Route::Spectral) - kotoc::apply(prop, psi, true)) < 1e-9);
    }
}

TEST_CASE("unitary eigensolver resolves degenerate spectra") {
    // tau = pi/4, h_z = 1: quasienergies sit on multiples of pi/(2N) with large multiplicities.
    for (int n : {4, 6}) {
        const auto prop = spectral_decompose(build_dense(SpinChainParams{n, 1.0, 0.0, 1.0, kPi / 4}));
        const double step = kPi / (2.0 * n);
        for (Eigen::Index k = 0; k < prop.eigenphases().size(); ++k) {
            const double q = prop.eigenphases()[k] / step;
            REQUIRE(std::abs(q - std::round(q)) * step < 1e-8);
        }
    }
}

TEST_CASE("tau = pi/4, h_z = 1, h_x = 0: U^{2N} is the z-parity string") {
    // The integrable point returns every z-basis state to itself after 2N kicks up to the
    // sign (-1)^popcount; U^{2N} is therefore a product operator but not the identity.
    for (int n : {2, 4, 6}) {
        const CMatrix u = build_dense(SpinChainParams{n, 1.0, 0.0, 1.0, kPi / 4}).dense();
        const CMatrix u2n = power(u, 2 * n);
        CHECK(oracle::max_abs(u2n - z_parity(n)) < 1e-9);
        CHECK(oracle::max_abs(power(u, 4 * n) - identity(u.rows())) < 1e-9);
        CHECK(oracle::max_abs(u2n - power(oracle::floquet_reference({n, 1.0, 0.0, 1.0, kPi / 4}), 2 * n)) < 1e-8);
    }
}

TEST_CASE("h_x = 0 reproduces U_0 without a separate code path") {
    const SpinChainParams p0{6, 1.0, 0.0, 4.0, kPi / 18};
    const auto h = oracle::chain_hamiltonians(6);
    const CMatrix u0 = oracle::expm_hermitian(h.h_xx, p0.tau) * oracle::expm_hermitian(4.0 * h.h_z, p0.tau);
    CHECK(oracle::max_abs(build_dense(p0).dense() - u0) < 1e-8);
}

TEST_CASE("propagator errors") {
    CHECK_THROWS_AS(build_dense(SpinChainParams{14, 1, 0, 1, 0.1}), ParameterError);
    CHECK_THROWS_AS(build_matrix_free(SpinChainParams{22, 1, 0, 1, 0.1}), ParameterError);
    const auto prop = build_matrix_free(SpinChainParams{4, 1, 0, 1, 0.1});
    CHECK_THROWS_AS(kotoc::apply(prop, CVector(CVector::Zero(8))), DimensionError);
    CHECK_THROWS_AS(prop.dense(), Error);
    CHECK_THROWS_AS(spectral_decompose(prop), Error);
    CHECK_THROWS_AS(kotoc::apply(prop, CVector(CVector::Zero(16)), false, Route::Spectral), Error);
}
