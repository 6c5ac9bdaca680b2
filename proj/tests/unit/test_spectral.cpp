#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "kotoc/error.hpp"
#include "kotoc/floquet.hpp"
#include "kotoc/spectral.hpp"
#include "oracles.hpp"

using namespace kotoc;

namespace {

constexpr double kPi = std::numbers::pi;

/// Phases on the circle whose unfolded spacings follow the given inverse CDF.
RVector synthetic_phases(int count, std::uint64_t seed, double (*inverse_cdf)(double)) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> gaps(static_cast<std::size_t>(count));
    double total = 0.0;
    for (auto& s : gaps) {
        s = inverse_cdf(u(g));
        total += s;
    }
    RVector phases(count);
    double acc = -kPi;
    for (int i = 0; i < count; ++i) {
        acc += gaps[static_cast<std::size_t>(i)] * 2 * kPi / total;
        phases[i] = acc;
    }
    phases[count - 1] = kPi;
    std::sort(phases.data(), phases.data() + count);
    return phases;
}

double poisson_inverse(double u) { return -std::log1p(-u); }
double wigner_inverse(double u) { return std::sqrt(-4.0 / kPi * std::log1p(-u)); }

}  // namespace

TEST_CASE("sector dimensions") {
    const auto [even, odd] = build_sectors(4);
    CHECK(even.dim() == 10);
    CHECK(odd.dim() == 6);
    for (int n = 2; n <= 12; n += 2) {
        const auto [e, o] = build_sectors(n);
        const auto d = Eigen::Index{1} << n;
        CHECK(e.dim() + o.dim() == d);
        CHECK(e.dim() == (d + (Eigen::Index{1} << (n / 2))) / 2);
    }
}

TEST_CASE("sector bases are orthonormal bit-reversal eigenvectors") {
    const int n = 6;
    const auto [even, odd] = build_sectors(n);
    const auto perm = bit_reversal(n);
    CMatrix basis(64, 64);
    Eigen::Index col = 0;
    for (const auto* sector : {&even, &odd}) {
        const double sign = sector->parity == Parity::Even ? 1.0 : -1.0;
        for (Eigen::Index k = 0; k < sector->dim(); ++k) {
            const CVector v = sector->basis_vector(k);
            CVector bv(64);
            for (Eigen::Index s = 0; s < 64; ++s) bv[perm[static_cast<std::size_t>(s)]] = v[s];
            REQUIRE(oracle::max_abs(bv - sign * v) == 0.0);
            basis.col(col++) = v;
        }
    }
    CHECK(oracle::max_abs(basis.adjoint() * basis - CMatrix::Identity(64, 64)) <= 1e-12);
}

TEST_CASE("propagator is block diagonal in the sectors") {
    oracle::Gen g(12);
    const auto prop = build_dense(oracle::random_params(6, g));
    const auto [even, odd] = build_sectors(6);
    CHECK(oracle::max_abs(sector_block(prop, even, odd)) <= 1e-10);
    CHECK(oracle::max_abs(sector_block(prop, odd, even)) <= 1e-10);
    for (const auto* s : {&even, &odd}) {
        const CMatrix b = sector_block(prop, *s, *s);
        CHECK(oracle::max_abs(b.adjoint() * b - CMatrix::Identity(b.rows(), b.cols())) <= 1e-10);
    }
}

TEST_CASE("sector spectra together give the full spectrum") {
    oracle::Gen g(13);
    const auto prop = spectral_decompose(build_dense(oracle::random_params(6, g)));
    const auto [even, odd] = build_sectors(6);
    std::vector<double> both;
    for (const auto* s : {&even, &odd}) {
        const RVector ph = sector_quasienergies(prop, *s);
        both.insert(both.end(), ph.data(), ph.data() + ph.size());
    }
    std::sort(both.begin(), both.end());
    REQUIRE(both.size() == 64);
    for (std::size_t i = 0; i < both.size(); ++i) CHECK(std::abs(both[i] - prop.eigenphases()[i]) <= 1e-8);
}

TEST_CASE("unfolding of equally spaced phases") {
    RVector phases(50);
    for (int i = 0; i < 50; ++i) phases[i] = -kPi + 2 * kPi * (i + 1) / 50.0;
    const auto e = unfold_spacings(phases, 50);
    REQUIRE(e.spacings.size() == 50);
    for (double s : e.spacings) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.degenerate_fraction == 0.0);
}

TEST_CASE("unfolded spacings have unit mean") {
    std::mt19937_64 g(14);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int trial = 0; trial < 20; ++trial) {
        const int count = 10 + trial * 37;
        RVector phases(count);
        for (int i = 0; i < count; ++i) phases[i] = u(g);
        std::sort(phases.data(), phases.data() + count);
        const auto e = unfold_spacings(phases, count);
        double mean = 0.0;
        for (double s : e.spacings) {
            REQUIRE(s >= 0.0);
            mean += s;
        }
        REQUIRE(e.spacings.size() == static_cast<std::size_t>(count));
        CHECK(std::abs(mean / count - 1.0) <= 1e-12);
    }
}

TEST_CASE("synthetic Poisson and Wigner ensembles are recognized") {
    const auto poisson = unfold_spacings(synthetic_phases(2000, 1, poisson_inverse), 2000);
    const auto wigner = unfold_spacings(synthetic_phases(2000, 2, wigner_inverse), 2000);
    const auto p = nnsd_compare(poisson);
    const auto w = nnsd_compare(wigner);
    CHECK(p.ks_poisson < p.ks_wigner);
    CHECK(p.ks_poisson < 0.05);
    CHECK(p.verdict == Verdict::Poisson);
    CHECK(w.ks_wigner < w.ks_poisson);
    CHECK(w.ks_wigner < 0.05);
    CHECK(w.verdict == Verdict::Wigner);

    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    RVector iid(2000);
    for (int i = 0; i < 2000; ++i) iid[i] = u(g);
    std::sort(iid.data(), iid.data() + 2000);
    const auto c = nnsd_compare(unfold_spacings(iid, 2000));
    CHECK(c.ks_poisson < c.ks_wigner);
}

TEST_CASE("histogram integrates to the in-range fraction") {
    const auto e = unfold_spacings(synthetic_phases(3000, 4, wigner_inverse), 3000);
    const auto h = nnsd_compare(e, 25, 4.0);
    REQUIRE(h.bin_edges.size() == 26);
    REQUIRE(h.density.size() == 25);
    double mass = 0.0;
    for (std::size_t b = 0; b < h.density.size(); ++b) mass += h.density[b] * (h.bin_edges[b + 1] - h.bin_edges[b]);
    const auto inside = std::count_if(e.spacings.begin(), e.spacings.end(), [](double s) { return s <= 4.0; });
    CHECK(mass == doctest::Approx(static_cast<double>(inside) / e.spacings.size()).epsilon(1e-12));
}

TEST_CASE("distribution closed forms") {
    CHECK(wigner_pdf(1.0) == doctest::Approx(kPi / 2 * std::exp(-kPi / 4)));
    CHECK(poisson_pdf(1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(wigner_cdf(0.0) == 0.0);
    CHECK(poisson_cdf(0.0) == 0.0);
    // The CDFs are integrals of the densities.
    for (double s : {0.3, 1.0, 2.5}) {
        double wi = 0.0;
        double pi = 0.0;
        const int steps = 20000;
        for (int k = 0; k < steps; ++k) {
            const double x = (k + 0.5) * s / steps;
            wi += wigner_pdf(x) * s / steps;
            pi += poisson_pdf(x) * s / steps;
        }
        CHECK(wigner_cdf(s) == doctest::Approx(wi).epsilon(1e-8));
        CHECK(poisson_cdf(s) == doctest::Approx(pi).epsilon(1e-8));
    }
}

TEST_CASE("degenerate spectra give an inconclusive verdict") {
    const auto prop = build_dense(SpinChainParams{8, 1.0, 1.0, 1.0, kPi / 4});
    const auto [even, odd] = build_sectors(8);
    const auto e = unfold_spacings(sector_quasienergies(prop, even), even.dim());
    CHECK(e.degenerate_fraction > 0.0);
    const auto integrable = build_dense(SpinChainParams{8, 1.0, 0.0, 1.0, kPi / 4});
    const auto d = unfold_spacings(sector_quasienergies(integrable, even), even.dim());
    CHECK(d.degenerate_fraction > 0.5);
    CHECK(nnsd_compare(d).verdict == Verdict::Inconclusive);
}

TEST_CASE("spectral errors") {
    CHECK_THROWS_AS(unfold_spacings(RVector::LinSpaced(9, -3.0, 3.0), 9), Error);
    CHECK_THROWS_AS(nnsd_compare(SpacingEnsemble{}), Error);
    const auto prop = build_matrix_free(SpinChainParams{6, 1.0, 1.0, 1.0, 0.3});
    const auto [even, odd] = build_sectors(4);
    CHECK_THROWS_AS(sector_quasienergies(prop, even), DimensionError);
}
