#include <doctest.h>

#include <set>

#include "kotoc/core.hpp"
#include "kotoc/error.hpp"
#include "oracles.hpp"

using namespace kotoc;

TEST_CASE("spin block at N=2 is sigma^x on the first site") {
    const CMatrix w = dense_realization(Observable::spin_block(2, Side::A));
    CHECK(oracle::max_abs(w - oracle::kron(oracle::pauli_x(), CMatrix::Identity(2, 2))) == 0.0);
}

TEST_CASE("spin blocks match the Kronecker reference") {
    for (int n : {2, 4, 6, 8}) {
        for (Side side : {Side::A, Side::B}) {
            const CMatrix w = dense_realization(Observable::spin_block(n, side));
            CHECK(oracle::max_abs(w - oracle::spin_block_reference(n, side)) < 1e-14);
        }
    }
}

TEST_CASE("spin block traces") {
    for (int n = 2; n <= 12; n += 2) {
        const auto w = Observable::spin_block(n, Side::A);
        CHECK(std::abs(w.trace()) == 0.0);
        CHECK(w.is_traceless());
        const double expected = 2.0 / n * std::ldexp(1.0, n);
        CHECK(w.trace_of_square() == doctest::Approx(expected).epsilon(1e-14));
        if (n <= 8) {
            const CMatrix d = dense_realization(w);
            CHECK((d * d).trace().real() == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("bit flip on |00>") {
    const auto w = Observable::spin_block(2, Side::A);
    CVector psi = CVector::Zero(4);
    psi[0] = 1.0;
    const CVector out = apply_observable(w, psi);
    CVector expected = CVector::Zero(4);
    expected[0b10] = 1.0;
    CHECK(oracle::max_abs(out - expected) == 0.0);
}

TEST_CASE("apply_observable agrees with dense products on random states") {
    oracle::Gen g(11);
    for (int n : {4, 6}) {
        for (Side side : {Side::A, Side::B}) {
            const auto w = Observable::spin_block(n, side);
            const CMatrix d = oracle::spin_block_reference(n, side);
            for (int k = 0; k < 100; ++k) {
                const CVector psi = oracle::random_state(d.rows(), g);
                CHECK(oracle::max_abs(apply_observable(w, psi) - d * psi) < 1e-12);
            }
            const CVector psi = oracle::random_state(d.rows(), g);
            CHECK(oracle::max_abs(apply_observable(w, apply_observable(w, psi)) - d * d * psi) < 1e-12);
        }
    }
}

TEST_CASE("block payload observables embed as B(x)I and I(x)B") {
    oracle::Gen g(5);
    for (int n : {2, 4, 6}) {
        const Eigen::Index bd = Eigen::Index{1} << (n / 2);
        const CMatrix block = oracle::random_hermitian(bd, g);
        const auto a = Observable::from_block(n, Side::A, block, ObservableKind::GueBlock);
        const auto b = Observable::from_block(n, Side::B, block, ObservableKind::GueBlock);
        const CMatrix id = CMatrix::Identity(bd, bd);
        CHECK(oracle::max_abs(dense_realization(a) - oracle::kron(block, id)) < 1e-13);
        CHECK(oracle::max_abs(dense_realization(b) - oracle::kron(id, block)) < 1e-13);
        const CMatrix states = [&] {
            CMatrix s(bd * bd, 3);
            for (int c = 0; c < 3; ++c) s.col(c) = oracle::random_state(bd * bd, g);
            return s;
        }();
        CHECK(oracle::max_abs(apply_observable(a, states) - oracle::kron(block, id) * states) < 1e-12);
        CHECK(oracle::max_abs(apply_observable(b, states) - oracle::kron(id, block) * states) < 1e-12);
        const double tr2 = (oracle::kron(block, id) * oracle::kron(block, id)).trace().real();
        CHECK(a.trace_of_square() == doctest::Approx(tr2).epsilon(1e-12));
    }
}

TEST_CASE("observables on opposite halves commute") {
    for (int n : {2, 4, 6, 8}) {
        const CMatrix a = dense_realization(Observable::spin_block(n, Side::A));
        const CMatrix b = dense_realization(Observable::spin_block(n, Side::B));
        CHECK(oracle::max_abs(a * b - b * a) == 0.0);
    }
    oracle::Gen g(3);
    const auto a = Observable::spin_block(10, Side::A);
    const auto b = Observable::spin_block(10, Side::B);
    const CVector psi = oracle::random_state(1024, g);
    CHECK(oracle::max_abs(apply_observable(a, apply_observable(b, psi)) -
                          apply_observable(b, apply_observable(a, psi))) < 1e-12);
}

TEST_CASE("observable construction errors") {
    CHECK_THROWS_AS(Observable::spin_block(3, Side::A), ParameterError);
    CHECK_THROWS_AS(build_block_observable(SpinChainParams{5, 1, 0, 0, 1}, Side::B), ParameterError);
    CMatrix bad = CMatrix::Zero(4, 4);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(Observable::from_block(4, Side::A, bad), ParameterError);
    CHECK_THROWS_AS(Observable::from_block(4, Side::A, CMatrix::Identity(2, 2)), DimensionError);
    CHECK_THROWS_AS(apply_observable(Observable::spin_block(4, Side::A), CVector(CVector::Zero(8))),
                    DimensionError);
}

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(validate(SpinChainParams{4, 1, 0, 4, 0.1}));
    CHECK_THROWS_AS(validate(SpinChainParams{5, 1, 0, 4, 0.1}), ParameterError);
    CHECK_THROWS_AS(validate(SpinChainParams{0, 1, 0, 4, 0.1}), ParameterError);
    CHECK_THROWS_AS(validate(SpinChainParams{4, 1, 0, 4, 0.0}), ParameterError);
    CHECK_THROWS_AS(validate(SpinChainParams{22, 1, 0, 4, 0.1}), ParameterError);
    CHECK_THROWS_AS(validate(SpinChainParams{14, 1, 0, 4, 0.1}, kDenseCap), ParameterError);
}

TEST_CASE("bit reversal") {
    CHECK(reverse_bits(0b001, 3) == 0b100);
    CHECK(reverse_bits(0b0110, 4) == 0b0110);
    CHECK(reverse_bits(0b1101, 4) == 0b1011);
    for (int n = 1; n <= 12; ++n) {
        const auto perm = bit_reversal(n);
        REQUIRE(perm.size() == (std::size_t{1} << n));
        std::set<std::uint32_t> image(perm.begin(), perm.end());
        CHECK(image.size() == perm.size());
        for (std::size_t s = 0; s < perm.size(); ++s) REQUIRE(perm[perm[s]] == s);
    }
    oracle::Gen g(17);
    for (int n = 13; n <= 20; ++n) {
        std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << n) - 1);
        for (int k = 0; k < 2000; ++k) {
            const auto s = pick(g);
            REQUIRE(reverse_bits(reverse_bits(s, n), n) == s);
        }
    }
}

TEST_CASE("site masks put site 1 on the most significant bit") {
    CHECK(site_mask(4, 1) == 0b1000);
    CHECK(site_mask(4, 4) == 0b0001);
}
