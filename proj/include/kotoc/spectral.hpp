#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kotoc/core.hpp"
#include "kotoc/floquet.hpp"

namespace kotoc {

enum class Parity { Even, Odd };

std::string to_string(Parity parity);

/// Eigenspace of the bit-reversal operator B. Even: palindromes |s> and (|s> + |Bs>)/sqrt2;
/// odd: (|s> - |Bs>)/sqrt2. Each basis vector is stored as the pair (s, Bs) with s <= Bs.
struct SymmetrySector {
    Parity parity;
    int n_sites;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> states;

    Eigen::Index dim() const { return static_cast<Eigen::Index>(states.size()); }
    CVector basis_vector(Eigen::Index k) const;
    /// P^dagger y for a full-space vector y.
    CVector project(const CVector& y) const;
    /// P c for sector coefficients c.
    CVector embed(const CVector& c) const;
};

/// (even, odd) sectors; dims (2^N + 2^{N/2})/2 and (2^N - 2^{N/2})/2 for even N.
std::pair<SymmetrySector, SymmetrySector> build_sectors(int n_sites);

/// P_row^dagger U P_col, using matrix-free applications of U.
CMatrix sector_block(const Propagator& prop, const SymmetrySector& row, const SymmetrySector& col);

/// Eigenphases of the sector block of U, ascending in (-pi, pi].
RVector sector_quasienergies(const Propagator& prop, const SymmetrySector& sector);

struct SpacingEnsemble {
    Parity parity = Parity::Even;
    RVector phases;
    /// Circular nearest-neighbour spacings scaled to unit mean (wrap-around included).
    std::vector<double> spacings;
    /// Share of raw spacings below the degeneracy tolerance.
    double degenerate_fraction = 0.0;
};

inline constexpr double kDegeneracyTolerance = 1e-10;

/// Unfolds sorted eigenphases on the circle: s_i = dim * dtheta_i / (2 pi).
SpacingEnsemble unfold_spacings(const RVector& phases, Eigen::Index sector_dim,
                                Parity parity = Parity::Even);

double wigner_pdf(double s);
double wigner_cdf(double s);
double poisson_pdf(double s);
double poisson_cdf(double s);

/// Kolmogorov-Smirnov distance between the empirical distribution of `samples` and `cdf`.
template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf cdf);

enum class Verdict { Wigner, Poisson, Inconclusive };

std::string to_string(Verdict verdict);

struct NnsdSummary {
    std::vector<double> bin_edges;
    std::vector<double> density;
    double ks_wigner = 0.0;
    double ks_poisson = 0.0;
    double degenerate_fraction = 0.0;
    Verdict verdict = Verdict::Inconclusive;
};

/// Histogram on [0, s_max] and KS distances to P_W(s) = (pi s/2) exp(-pi s^2/4) and
/// P_P(s) = exp(-s). A degenerate fraction above one half yields Verdict::Inconclusive.
NnsdSummary nnsd_compare(const SpacingEnsemble& ensemble, int bins = 25, double s_max = 4.0);

}  // namespace kotoc

#include <algorithm>

#include "kotoc/error.hpp"

namespace kotoc {

template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf cdf) {
    if (samples.empty()) throw Error("KS distance of an empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        worst = std::max({worst, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return worst;
}

}  // namespace kotoc
