#include "kotoc/spectral.hpp"

#include <cmath>
#include <numbers>

#include "kotoc/parallel.hpp"

namespace kotoc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

}  // namespace

std::string to_string(Parity parity) { return parity == Parity::Even ? "even" : "odd"; }

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Wigner: return "wigner";
        case Verdict::Poisson: return "poisson";
        case Verdict::Inconclusive: return "inconclusive (degenerate)";
    }
    return "unknown";
}

CVector SymmetrySector::basis_vector(Eigen::Index k) const {
    CVector v = CVector::Zero(std::int64_t{1} << n_sites);
    const auto [s, t] = states[static_cast<std::size_t>(k)];
    if (s == t) {
        v[s] = 1.0;
    } else {
        v[s] = kInvSqrt2;
        v[t] = parity == Parity::Even ? kInvSqrt2 : -kInvSqrt2;
    }
    return v;
}

CVector SymmetrySector::project(const CVector& y) const {
    CVector out(dim());
    const double sign = parity == Parity::Even ? 1.0 : -1.0;
    for (Eigen::Index k = 0; k < dim(); ++k) {
        const auto [s, t] = states[static_cast<std::size_t>(k)];
        out[k] = s == t ? y[s] : kInvSqrt2 * (y[s] + sign * y[t]);
    }
    return out;
}

CVector SymmetrySector::embed(const CVector& c) const {
    CVector out = CVector::Zero(std::int64_t{1} << n_sites);
    const double sign = parity == Parity::Even ? 1.0 : -1.0;
    for (Eigen::Index k = 0; k < dim(); ++k) {
        const auto [s, t] = states[static_cast<std::size_t>(k)];
        if (s == t) {
            out[s] += c[k];
        } else {
            out[s] += kInvSqrt2 * c[k];
            out[t] += sign * kInvSqrt2 * c[k];
        }
    }
    return out;
}

std::pair<SymmetrySector, SymmetrySector> build_sectors(int n_sites) {
    validate(SpinChainParams{.n_sites = n_sites}, kMatrixFreeCap);
    SymmetrySector even{Parity::Even, n_sites, {}};
    SymmetrySector odd{Parity::Odd, n_sites, {}};
    const auto perm = bit_reversal(n_sites);
    for (std::uint32_t s = 0; s < perm.size(); ++s) {
        const std::uint32_t t = perm[s];
        if (s == t) {
            even.states.emplace_back(s, s);
        } else if (s < t) {
            even.states.emplace_back(s, t);
            odd.states.emplace_back(s, t);
        }
    }
    return {std::move(even), std::move(odd)};
}

CMatrix sector_block(const Propagator& prop, const SymmetrySector& row, const SymmetrySector& col) {
    if (row.n_sites != prop.params().n_sites || col.n_sites != prop.params().n_sites) {
        throw DimensionError("sector and propagator have different chain lengths");
    }
    CMatrix block(row.dim(), col.dim());
    parallel_for(static_cast<std::size_t>(col.dim()), [&](std::size_t k) {
        CVector y = col.basis_vector(static_cast<Eigen::Index>(k));
        apply_in_place(prop, y);
        block.col(static_cast<Eigen::Index>(k)) = row.project(y);
    });
    return block;
}

RVector sector_quasienergies(const Propagator& prop, const SymmetrySector& sector) {
    return unitary_eigen(sector_block(prop, sector, sector)).phases;
}

SpacingEnsemble unfold_spacings(const RVector& phases, Eigen::Index sector_dim, Parity parity) {
    if (phases.size() < 10) throw Error("need at least 10 levels to unfold spacings");
    if (sector_dim < 1) throw ParameterError("sector dimension must be positive");
    SpacingEnsemble out;
    out.parity = parity;
    out.phases = phases;
    std::sort(out.phases.begin(), out.phases.end());
    const Eigen::Index n = out.phases.size();
    const double scale = static_cast<double>(sector_dim) / kTwoPi;
    std::size_t degenerate = 0;
    out.spacings.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double raw = i + 1 < n ? out.phases[i + 1] - out.phases[i]
                                     : kTwoPi + out.phases[0] - out.phases[n - 1];
        if (raw < kDegeneracyTolerance) ++degenerate;
        out.spacings.push_back(raw * scale);
    }
    out.degenerate_fraction = static_cast<double>(degenerate) / static_cast<double>(n);
    return out;
}

double wigner_pdf(double s) {
    return std::numbers::pi * s / 2.0 * std::exp(-std::numbers::pi * s * s / 4.0);
}

double wigner_cdf(double s) { return s <= 0.0 ? 0.0 : 1.0 - std::exp(-std::numbers::pi * s * s / 4.0); }

double poisson_pdf(double s) { return s < 0.0 ? 0.0 : std::exp(-s); }

double poisson_cdf(double s) { return s <= 0.0 ? 0.0 : 1.0 - std::exp(-s); }

NnsdSummary nnsd_compare(const SpacingEnsemble& ensemble, int bins, double s_max) {
    if (ensemble.spacings.empty()) throw Error("no spacings to compare");
    if (bins < 1 || !(s_max > 0.0)) throw ParameterError("histogram needs bins >= 1 and s_max > 0");
    NnsdSummary out;
    const double width = s_max / bins;
    for (int b = 0; b <= bins; ++b) out.bin_edges.push_back(b * width);
    out.density.assign(static_cast<std::size_t>(bins), 0.0);
    for (double s : ensemble.spacings) {
        if (s < 0.0 || s >= s_max) continue;
        const auto b = std::min(static_cast<std::size_t>(s / width), static_cast<std::size_t>(bins - 1));
        out.density[b] += 1.0;
    }
    const double norm = static_cast<double>(ensemble.spacings.size()) * width;
    for (auto& x : out.density) x /= norm;
    out.ks_wigner = ks_distance(ensemble.spacings, wigner_cdf);
    out.ks_poisson = ks_distance(ensemble.spacings, poisson_cdf);
    out.degenerate_fraction = ensemble.degenerate_fraction;
    if (ensemble.degenerate_fraction > 0.5) {
        out.verdict = Verdict::Inconclusive;
    } else {
        out.verdict = out.ks_wigner < out.ks_poisson ? Verdict::Wigner : Verdict::Poisson;
    }
    return out;
}

}  // namespace kotoc
