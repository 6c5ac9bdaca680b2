#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kotoc/core.hpp"
#include "kotoc/floquet.hpp"
#include "kotoc/parallel.hpp"

namespace kotoc {

/// Per-kick infinite-temperature OTOC
///   C(n) = -Tr([W(n), V]^2) / (2 d),  W(n) = U^{-n} W U^n,  d = d_A d_B,
/// split as C = C2 - C4 with C2 = Tr(W(n)^2 V^2)/d and C4 = Tr(W(n) V W(n) V)/d.
struct OtocSeries {
    std::vector<int> n;
    std::vector<double> c2;
    std::vector<double> c4;
    std::vector<double> c;
    /// Standard error of c over stochastic samples; empty for exact backends.
    std::vector<double> std_error;
    /// Saturation value used to normalize c.
    double c_inf = 1.0;

    struct Meta {
        SpinChainParams params;
        std::string w_kind;
        std::string v_kind;
        std::string backend;
        std::uint64_t seed = 0;
        int samples = 0;
        /// Largest |Im| of the Hermitian four-point estimate over n.
        double max_imag_residual = 0.0;
        /// Largest |Im| of the raw one-sided four-point estimate over n.
        double max_raw_imag = 0.0;
    } meta;

    std::size_t size() const { return n.size(); }
    std::vector<double> normalized() const;
    std::vector<double> normalized_std_error() const;
};

/// Saturation value Tr(W^2) Tr(V^2) / (d^2 - 1), d = 2^N. The closed form assumes
/// traceless observables; `traceless` records whether that holds.
struct CInfinity {
    double value;
    bool traceless;
};

CInfinity c_infinity(const Observable& w, const Observable& v);

enum class ExactMethod {
    Auto,        ///< Spectral if the propagator carries its eigendecomposition, else Heisenberg
    Spectral,    ///< W(n) through eigenphases; one d^3 product per kick
    Heisenberg,  ///< W(n) = U^dagger W(n-1) U with matrix-free columns; O(N d^2) per kick
};

/// Exact traces for 0 <= n <= n_max (N <= kDenseCap).
OtocSeries otoc_dense(const Propagator& prop, const Observable& w, const Observable& v,
                      int n_max, ExactMethod method = ExactMethod::Auto);

/// Haar-random-state estimate of the traces, averaged over `n_samples` states.
///
/// For each state psi the estimator uses X = W(n):
///   C2 ~ (|X V psi|^2 + |V X psi|^2) / 2,  C4 ~ Re <V X psi | X V psi>,
/// so that C2 - C4 = |[X, V] psi|^2 / 2 is non-negative statewise. Each state takes
/// O(n_max^2) propagator applications. Sample k draws from stream (seed, "haar", k), and
/// the reduction runs in sample order, so results do not depend on `workers`.
OtocSeries otoc_stochastic(const Propagator& prop, const Observable& w, const Observable& v,
                           int n_max, int n_samples, std::uint64_t seed,
                           int workers = worker_count());

/// Per-sample values of the stochastic estimator for one Haar state.
struct OtocSample {
    std::vector<double> c2, c4, c, imag, raw_imag;
};

OtocSample otoc_single_state(const Propagator& prop, const Observable& w, const Observable& v,
                             int n_max, const CVector& psi);

/// Mean and standard error of per-sample series, reduced in sample order.
OtocSeries reduce_samples(const std::vector<OtocSample>& samples, int n_max);

}  // namespace kotoc
