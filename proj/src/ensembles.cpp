#include "kotoc/ensembles.hpp"

#include <cmath>

#include "kotoc/error.hpp"
#include "kotoc/parallel.hpp"

namespace kotoc {

namespace {

CMatrix ginibre(std::int64_t dim, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

void check_dim(std::int64_t dim) {
    if (dim < 1) throw ParameterError("ensemble dimension must be positive");
}

struct MeanSe {
    double mean;
    double se;
};

MeanSe mean_and_se(const std::vector<double>& x) {
    const double m = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return {mean, x.size() > 1 ? std::sqrt(ss / (m - 1.0) / m) : 0.0};
}

}  // namespace

CVector haar_state(std::int64_t dim, Rng& rng) {
    check_dim(dim);
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector psi(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        psi[i] = Complex(re, im);
    }
    psi.normalize();
    return psi;
}

CMatrix gue_matrix(std::int64_t dim, Rng& rng) {
    check_dim(dim);
    const CMatrix m = ginibre(dim, rng);
    CMatrix w = 0.5 * (m + m.adjoint());
    // Exact Hermiticity, including real diagonal.
    for (Eigen::Index i = 0; i < dim; ++i) w(i, i) = w(i, i).real();
    return w;
}

CMatrix cue_matrix(std::int64_t dim, Rng& rng) {
    check_dim(dim);
    Eigen::HouseholderQR<CMatrix> qr(ginibre(dim, rng));
    CMatrix q = qr.householderQ();
    const CMatrix& packed = qr.matrixQR();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex r = packed(j, j);
        const double mag = std::abs(r);
        q.col(j) *= mag > 0.0 ? r / mag : Complex(1.0, 0.0);
    }
    return q;
}

EnsembleSample sample_gue(std::int64_t dim, std::uint64_t seed) {
    Rng rng = make_stream(seed, "gue", 0);
    return {EnsembleKind::Gue, dim, seed, gue_matrix(dim, rng), CVector()};
}

EnsembleSample sample_cue(std::int64_t dim, std::uint64_t seed) {
    Rng rng = make_stream(seed, "cue", 0);
    return {EnsembleKind::Cue, dim, seed, cue_matrix(dim, rng), CVector()};
}

EnsembleSample sample_haar_state(std::int64_t dim, std::uint64_t seed) {
    Rng rng = make_stream(seed, "haar", 0);
    return {EnsembleKind::HaarState, dim, seed, CMatrix(), haar_state(dim, rng)};
}

std::pair<Observable, Observable> gue_pair(int n_sites, std::uint64_t seed, std::uint64_t index) {
    const std::int64_t bd = std::int64_t{1} << (n_sites / 2);
    Rng rng_w = make_stream(seed, "rbo-w", index);
    Rng rng_v = make_stream(seed, "rbo-v", index);
    return {Observable::from_block(n_sites, Side::A, gue_matrix(bd, rng_w), ObservableKind::GueBlock),
            Observable::from_block(n_sites, Side::B, gue_matrix(bd, rng_v), ObservableKind::GueBlock)};
}

OtocSeries averaged_rbo_otoc(const Propagator& prop, int n_max, int n_pairs, std::uint64_t seed,
                             const RboOptions& options) {
    if (n_pairs < 1) throw ParameterError("need at least one GUE pair");
    if (n_max < 0) throw ParameterError("n_max must be non-negative");
    if (options.states_per_pair < 1) throw ParameterError("need at least one state per pair");
    const int n_sites = prop.params().n_sites;
    std::vector<OtocSeries> per_pair(static_cast<std::size_t>(n_pairs));
    parallel_for(
        per_pair.size(),
        [&](std::size_t p) {
            const auto [w, v] = gue_pair(n_sites, seed, p);
            if (options.backend == RboBackend::Dense) {
                per_pair[p] = otoc_dense(prop, w, v, n_max);
                return;
            }
            std::vector<OtocSample> samples;
            for (int s = 0; s < options.states_per_pair; ++s) {
                Rng rng = make_stream(seed, "rbo-haar",
                                      p * static_cast<std::size_t>(options.states_per_pair) +
                                          static_cast<std::size_t>(s));
                samples.push_back(otoc_single_state(prop, w, v, n_max, haar_state(prop.dim(), rng)));
            }
            per_pair[p] = reduce_samples(samples, n_max);
        },
        options.workers);

    const auto count = static_cast<std::size_t>(n_max) + 1;
    OtocSeries out;
    out.n.resize(count);
    out.c2.assign(count, 0.0);
    out.c4.assign(count, 0.0);
    out.c.assign(count, 0.0);
    out.std_error.assign(count, 0.0);
    std::vector<double> column(per_pair.size());
    for (std::size_t i = 0; i < count; ++i) {
        out.n[i] = static_cast<int>(i);
        for (std::size_t p = 0; p < per_pair.size(); ++p) {
            out.c2[i] += per_pair[p].c2[i];
            column[p] = per_pair[p].c[i];
        }
        out.c2[i] /= static_cast<double>(per_pair.size());
        const auto stats = mean_and_se(column);
        out.c[i] = stats.mean;
        out.c4[i] = out.c2[i] - out.c[i];
        out.std_error[i] = stats.se;
    }
    for (const auto& s : per_pair) {
        out.meta.max_imag_residual = std::max(out.meta.max_imag_residual, s.meta.max_imag_residual);
        out.meta.max_raw_imag = std::max(out.meta.max_raw_imag, s.meta.max_raw_imag);
    }
    out.c_inf = static_cast<double>(prop.dim());
    out.meta.params = prop.params();
    out.meta.w_kind = to_string(ObservableKind::GueBlock);
    out.meta.v_kind = to_string(ObservableKind::GueBlock);
    out.meta.backend = options.backend == RboBackend::Dense ? "dense" : "stochastic";
    out.meta.seed = seed;
    out.meta.samples = n_pairs;
    return out;
}

CueSaturation cue_saturation_oracle(const Observable& w, const Observable& v) {
    if (!w.is_traceless() || !v.is_traceless()) {
        throw ParameterError("CUE saturation closed forms require traceless observables");
    }
    const double d = static_cast<double>(w.dim());
    const double t = w.trace_of_square() * v.trace_of_square();
    return {t / (d * d), -t / (d * d * (d * d - 1.0)), t / (d * d - 1.0)};
}

CueMonteCarlo cue_monte_carlo(const Observable& w, const Observable& v, int n_unitaries,
                              std::uint64_t seed) {
    if (n_unitaries < 2) throw ParameterError("need at least two unitaries");
    if (w.n_sites() > 8) throw ParameterError("CUE Monte Carlo is limited to N <= 8");
    const CMatrix wd = dense_realization(w);
    const CMatrix vd = dense_realization(v);
    const CMatrix v2 = vd * vd;
    const CMatrix w2 = wd * wd;
    const double d = static_cast<double>(w.dim());
    std::vector<double> c2(static_cast<std::size_t>(n_unitaries));
    std::vector<double> c4(c2.size());
    std::vector<double> c(c2.size());
    for (std::size_t k = 0; k < c2.size(); ++k) {
        Rng rng = make_stream(seed, "cue", k);
        const CMatrix u = cue_matrix(w.dim(), rng);
        const CMatrix w_t = u.adjoint() * wd * u;
        const CMatrix x = w_t * vd;
        c2[k] = (u.adjoint() * w2 * u * v2).trace().real() / d;
        c4[k] = (x * x).trace().real() / d;
        c[k] = c2[k] - c4[k];
    }
    const auto s2 = mean_and_se(c2);
    const auto s4 = mean_and_se(c4);
    const auto sc = mean_and_se(c);
    return {s2.mean, s2.se, s4.mean, s4.se, sc.mean, sc.se, n_unitaries};
}

GueMoment gue_second_moment(std::int64_t dim, int n_samples, std::uint64_t seed) {
    if (n_samples < 2) throw ParameterError("need at least two GUE samples");
    CMatrix sum = CMatrix::Zero(dim, dim);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < n_samples; ++k) {
        Rng rng = make_stream(seed, "gue-moment", static_cast<std::uint64_t>(k));
        const CMatrix w = gue_matrix(dim, rng);
        const CMatrix w2 = w * w;
        sum += w2;
        sum_sq += w2.cwiseAbs2();
    }
    const double m = n_samples;
    GueMoment out;
    out.mean_square = sum / m;
    const Eigen::MatrixXd var = (sum_sq / m - out.mean_square.cwiseAbs2()) * (m / (m - 1.0));
    out.std_error = (var / m).cwiseMax(0.0).cwiseSqrt();
    out.samples = n_samples;
    return out;
}

}  // namespace kotoc
