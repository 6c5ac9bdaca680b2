#pragma once

#include <cstdint>

#include "kotoc/core.hpp"
#include "kotoc/floquet.hpp"
#include "kotoc/otoc.hpp"
#include "kotoc/random.hpp"

namespace kotoc {

enum class EnsembleKind { Gue, Cue, HaarState };

struct EnsembleSample {
    EnsembleKind kind;
    std::int64_t dim;
    std::uint64_t seed;
    CMatrix matrix;  ///< GUE / CUE payload
    CVector vector;  ///< Haar state payload
};

/// Unit vector with i.i.d. complex Gaussian amplitudes (Haar distributed).
CVector haar_state(std::int64_t dim, Rng& rng);

/// W = (M + M^dagger)/2 with Re and Im of every M entry drawn from N(0, 1).
/// The ensemble average of W^2 is dim * I.
CMatrix gue_matrix(std::int64_t dim, Rng& rng);

/// Haar unitary: QR of a complex Ginibre matrix with the phases of diag(R) moved into Q.
CMatrix cue_matrix(std::int64_t dim, Rng& rng);

EnsembleSample sample_gue(std::int64_t dim, std::uint64_t seed);
EnsembleSample sample_cue(std::int64_t dim, std::uint64_t seed);
EnsembleSample sample_haar_state(std::int64_t dim, std::uint64_t seed);

enum class RboBackend { Dense, Stochastic };

struct RboOptions {
    RboBackend backend = RboBackend::Dense;
    int states_per_pair = 1;  ///< Haar states per pair for the stochastic backend
    int workers = worker_count();
};

/// OTOC averaged over n_pairs independent GUE observables W (x) I and I (x) V.
/// The series is normalized by c_inf = d_A d_B, under which the mean equals the linear
/// operator entanglement of U^n. std_error is the spread over pairs.
OtocSeries averaged_rbo_otoc(const Propagator& prop, int n_max, int n_pairs, std::uint64_t seed,
                             const RboOptions& options = {});

/// The pair (W on A, V on B) used for pair `index` of averaged_rbo_otoc.
std::pair<Observable, Observable> gue_pair(int n_sites, std::uint64_t seed, std::uint64_t index);

/// Haar-average of C2, C4 and C over U for fixed traceless W and V:
///   C2 = Tr W^2 Tr V^2 / d^2,  C4 = -Tr W^2 Tr V^2 / (d^2 (d^2 - 1)),  C = Tr W^2 Tr V^2 / (d^2 - 1).
struct CueSaturation {
    double c2_bar;
    double c4_bar;
    double c_bar;
};

/// Throws ParameterError for observables that are not traceless.
CueSaturation cue_saturation_oracle(const Observable& w, const Observable& v);

/// Monte Carlo estimate of the CUE averages with standard errors (dense, N <= 8).
struct CueMonteCarlo {
    double c2_mean, c2_se;
    double c4_mean, c4_se;
    double c_mean, c_se;
    int samples;
};

CueMonteCarlo cue_monte_carlo(const Observable& w, const Observable& v, int n_unitaries,
                              std::uint64_t seed);

/// Sample mean of W^2 over GUE draws with the entrywise standard error of that mean.
struct GueMoment {
    CMatrix mean_square;
    Eigen::MatrixXd std_error;
    int samples;
};

GueMoment gue_second_moment(std::int64_t dim, int n_samples, std::uint64_t seed);

}  // namespace kotoc
