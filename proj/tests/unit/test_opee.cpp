#include <doctest.h>

#include <numbers>

#include "kotoc/error.hpp"
#include "kotoc/floquet.hpp"
#include "kotoc/opee.hpp"
#include "oracles.hpp"

using namespace kotoc;

namespace {

constexpr double kPi = std::numbers::pi;

double svd_entropy(const CMatrix& u, Eigen::Index da, Eigen::Index db) {
    // Independent realignment: loop over the four indices explicitly.
    CMatrix r(da * da, db * db);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index ap = 0; ap < da; ++ap)
            for (Eigen::Index b = 0; b < db; ++b)
                for (Eigen::Index bp = 0; bp < db; ++bp) r(a * da + ap, b * db + bp) = u(a * db + b, ap * db + bp);
    Eigen::JacobiSVD<CMatrix> svd(r);
    const double d = static_cast<double>(u.rows());
    double purity = 0.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const double lambda = svd.singularValues()[i] * svd.singularValues()[i] / d;
        purity += lambda * lambda;
    }
    return 1.0 - purity;
}

}  // namespace

TEST_CASE("product operators realign to rank one") {
    oracle::Gen g(1);
    const CMatrix ua = oracle::random_unitary(4, g);
    const CMatrix ub = oracle::random_unitary(4, g);
    const CMatrix r = realign(oracle::kron(ua, ub), 4, 4);
    Eigen::JacobiSVD<CMatrix> svd(r);
    CHECK(svd.singularValues()[0] > 1.0);
    CHECK(svd.singularValues()[1] < 1e-10);
    CHECK(std::abs(linear_entropy(oracle::kron(ua, ub), 4, 4)) <= 1e-12);
    CHECK(std::abs(linear_entropy(CMatrix::Identity(64, 64), 8, 8)) <= 1e-12);
}

TEST_CASE("realignment preserves the Frobenius norm") {
    oracle::Gen g(2);
    const CMatrix u = oracle::random_unitary(64, g);
    const CMatrix r = realign(u, 8, 8);
    CHECK(r.rows() == 64);
    CHECK(r.cols() == 64);
    CHECK(std::abs(r.squaredNorm() - 64.0) <= 1e-8);
    const RVector lambda = schmidt_weights(u, 8, 8);
    CHECK(std::abs(lambda.sum() - 1.0) <= 1e-8);
}

TEST_CASE("swap operator is maximally entangling") {
    const CMatrix s = oracle::swap_operator(4);
    const RVector lambda = schmidt_weights(s, 4, 4);
    for (Eigen::Index i = 0; i < lambda.size(); ++i) CHECK(lambda[i] == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(linear_entropy(s, 4, 4) == doctest::Approx(1.0 - 1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("linear entropy agrees with the SVD oracle") {
    oracle::Gen g(3);
    for (int trial = 0; trial < 4; ++trial) {
        const CMatrix u = oracle::random_unitary(64, g);
        CHECK(std::abs(linear_entropy(u, 8, 8) - svd_entropy(u, 8, 8)) <= 1e-10);
    }
    const CMatrix u = oracle::random_unitary(32, g);
    CHECK(std::abs(linear_entropy(u, 4, 8) - svd_entropy(u, 4, 8)) <= 1e-10);
}

TEST_CASE("linear entropy is invariant under local unitaries") {
    oracle::Gen g(4);
    const CMatrix u = build_dense(oracle::random_params(6, g)).dense();
    const CMatrix left = oracle::kron(oracle::random_unitary(8, g), oracle::random_unitary(8, g));
    const CMatrix right = oracle::kron(oracle::random_unitary(8, g), oracle::random_unitary(8, g));
    CHECK(std::abs(linear_entropy(left * u * right, 8, 8) - linear_entropy(u, 8, 8)) <= 1e-10);
}

TEST_CASE("OPEE series bounds and normalization") {
    oracle::Gen g(5);
    for (int trial = 0; trial < 3; ++trial) {
        const auto prop = build_dense(oracle::random_params(6, g));
        const auto s = opee_series(prop, 12, true);
        CHECK(std::abs(s.e_l[0]) <= 1e-12);
        for (std::size_t i = 0; i < s.n.size(); ++i) {
            REQUIRE(s.e_l[i] >= -1e-12);
            REQUIRE(s.e_l[i] <= 1.0 - 1.0 / 64.0 + 1e-10);
            REQUIRE(std::abs(s.e_l[i] - (1.0 - s.purity[i])) <= 1e-12);
            REQUIRE(std::abs(s.spectra[i].sum() - 1.0) <= 1e-8);
        }
    }
}

TEST_CASE("OPEE series matches direct powers") {
    oracle::Gen g(6);
    const auto prop = build_dense(oracle::random_params(4, g));
    const auto s = opee_series(prop, 6);
    CMatrix un = CMatrix::Identity(16, 16);
    for (int n = 0; n <= 6; ++n) {
        CHECK(std::abs(s.e_l[n] - svd_entropy(un, 4, 4)) <= 1e-10);
        un = prop.dense() * un;
    }
}

TEST_CASE("OPEE returns to zero after 2N kicks at tau = pi/4, h_z = 1, h_x = 0") {
    for (int n : {6, 8}) {
        const auto s = opee_series(build_dense(SpinChainParams{n, 1.0, 0.0, 1.0, kPi / 4}), 2 * n);
        CHECK(std::abs(s.e_l[2 * n]) <= 1e-9);
        CHECK(s.e_l[n] > 0.1);
    }
}

TEST_CASE("OPEE errors") {
    CHECK_THROWS_AS(linear_entropy(CMatrix::Identity(16, 16), 4, 8), DimensionError);
    CHECK_THROWS_AS(realign(CMatrix(CMatrix::Identity(16, 8)), 4, 4), DimensionError);
}
