#include "kotoc/otoc.hpp"

#include <cmath>

#include "kotoc/ensembles.hpp"
#include "kotoc/error.hpp"
#include "kotoc/random.hpp"

namespace kotoc {

std::vector<double> OtocSeries::normalized() const {
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i] / c_inf;
    return out;
}

std::vector<double> OtocSeries::normalized_std_error() const {
    std::vector<double> out(std_error.size());
    for (std::size_t i = 0; i < std_error.size(); ++i) out[i] = std_error[i] / c_inf;
    return out;
}

CInfinity c_infinity(const Observable& w, const Observable& v) {
    if (w.n_sites() != v.n_sites()) throw DimensionError("observables live on different chains");
    const double d = static_cast<double>(w.dim());
    return {w.trace_of_square() * v.trace_of_square() / (d * d - 1.0),
            w.is_traceless() && v.is_traceless()};
}

namespace {

void check_pair(const Propagator& prop, const Observable& w, const Observable& v) {
    if (w.n_sites() != prop.params().n_sites || v.n_sites() != prop.params().n_sites) {
        throw DimensionError("observables and propagator have different chain lengths");
    }
}

OtocSeries empty_series(const Propagator& prop, const Observable& w, const Observable& v,
                        int n_max) {
    if (n_max < 0) throw ParameterError("n_max must be non-negative");
    OtocSeries s;
    s.n.resize(static_cast<std::size_t>(n_max) + 1);
    for (int k = 0; k <= n_max; ++k) s.n[static_cast<std::size_t>(k)] = k;
    s.c2.assign(s.n.size(), 0.0);
    s.c4.assign(s.n.size(), 0.0);
    s.c.assign(s.n.size(), 0.0);
    s.c_inf = c_infinity(w, v).value;
    s.meta.params = prop.params();
    s.meta.w_kind = to_string(w.kind());
    s.meta.v_kind = to_string(v.kind());
    return s;
}

// Given X = W(n) V (or its adjoint), fill the three traces at index k.
template <typename Mat>
void record_traces(OtocSeries& s, std::size_t k, const Mat& x, double d) {
    const double norm2 = x.squaredNorm();
    const double commutator = 0.5 * (x - x.adjoint()).squaredNorm();
    const Complex trace_x2 = (x.array() * x.transpose().array()).sum();
    s.c2[k] = norm2 / d;
    s.c[k] = commutator / d;
    s.c4[k] = s.c2[k] - s.c[k];
    s.meta.max_raw_imag = std::max(s.meta.max_raw_imag, std::abs(trace_x2.imag()) / d);
}

OtocSeries otoc_spectral(const Propagator& prop, const Observable& w, const Observable& v,
                         int n_max) {
    OtocSeries s = empty_series(prop, w, v, n_max);
    s.meta.backend = "dense-spectral";
    const CMatrix& e = prop.eigenvectors();
    const RVector& theta = prop.eigenphases();
    const double d = static_cast<double>(prop.dim());
    const CMatrix w_eig = e.adjoint() * apply_observable(w, e);
    const CMatrix v_eig = e.adjoint() * apply_observable(v, e);
    CMatrix w_n(w_eig.rows(), w_eig.cols());
    CMatrix x(w_eig.rows(), w_eig.cols());
    CVector phase(theta.size());
    for (int k = 0; k <= n_max; ++k) {
        // E^dagger W(n) E = diag(e^{-i theta n}) W~ diag(e^{i theta n})
        for (Eigen::Index j = 0; j < theta.size(); ++j) phase[j] = std::polar(1.0, -theta[j] * k);
        w_n = phase.asDiagonal() * w_eig * phase.conjugate().asDiagonal();
        x.noalias() = w_n * v_eig;
        record_traces(s, static_cast<std::size_t>(k), x, d);
    }
    return s;
}

OtocSeries otoc_heisenberg(const Propagator& prop, const Observable& w, const Observable& v,
                           int n_max) {
    OtocSeries s = empty_series(prop, w, v, n_max);
    s.meta.backend = "dense-heisenberg";
    const double d = static_cast<double>(prop.dim());
    CMatrix w_n = dense_realization(w);
    for (int k = 0; k <= n_max; ++k) {
        if (k > 0) {
            apply_columns(prop, w_n, true);  // U^dagger W
            w_n.adjointInPlace();            // W U
            apply_columns(prop, w_n, true);  // U^dagger W U
        }
        // Y = V W(n) = X^dagger; the traces are invariant under X -> X^dagger up to conjugation.
        const CMatrix y = apply_observable(v, w_n);
        record_traces(s, static_cast<std::size_t>(k), y, d);
    }
    return s;
}

}  // namespace

OtocSeries otoc_dense(const Propagator& prop, const Observable& w, const Observable& v,
                      int n_max, ExactMethod method) {
    check_pair(prop, w, v);
    validate(prop.params(), kDenseCap);
    if (method == ExactMethod::Auto) {
        method = prop.has_spectral() ? ExactMethod::Spectral : ExactMethod::Heisenberg;
    }
    if (method == ExactMethod::Spectral) {
        if (!prop.has_spectral()) throw Error("spectral OTOC needs a spectral propagator");
        return otoc_spectral(prop, w, v, n_max);
    }
    return otoc_heisenberg(prop, w, v, n_max);
}

OtocSample otoc_single_state(const Propagator& prop, const Observable& w, const Observable& v,
                             int n_max, const CVector& psi) {
    check_pair(prop, w, v);
    const auto count = static_cast<std::size_t>(n_max) + 1;
    OtocSample out;
    out.c2.resize(count);
    out.c4.resize(count);
    out.c.resize(count);
    out.imag.resize(count);
    out.raw_imag.resize(count);

    // Forward states U^n psi and U^n V psi are advanced one kick at a time.
    CVector fwd_psi = psi;
    CVector fwd_vpsi = apply_observable(v, psi);
    CVector x_psi(psi.size());
    CVector x_vpsi(psi.size());
    for (int k = 0; k <= n_max; ++k) {
        if (k > 0) {
            apply_in_place(prop, fwd_psi);
            apply_in_place(prop, fwd_vpsi);
        }
        x_psi = apply_observable(w, fwd_psi);
        x_vpsi = apply_observable(w, fwd_vpsi);
        for (int j = 0; j < k; ++j) {
            apply_in_place(prop, x_psi, true);
            apply_in_place(prop, x_vpsi, true);
        }
        const CVector vx_psi = apply_observable(v, x_psi);  // V X psi
        // x_vpsi is X V psi
        const Complex forward = vx_psi.dot(x_vpsi);   // <V X psi | X V psi>
        const Complex backward = x_vpsi.dot(vx_psi);  // <X V psi | V X psi>
        const auto i = static_cast<std::size_t>(k);
        out.c2[i] = 0.5 * (x_vpsi.squaredNorm() + vx_psi.squaredNorm());
        out.c4[i] = 0.5 * (forward + backward).real();
        out.c[i] = 0.5 * (x_vpsi - vx_psi).squaredNorm();
        out.imag[i] = 0.5 * (forward + backward).imag();
        out.raw_imag[i] = forward.imag();
    }
    // c4 is re-derived so that c = c2 - c4 holds to rounding.
    for (std::size_t i = 0; i < count; ++i) out.c4[i] = out.c2[i] - out.c[i];
    return out;
}

OtocSeries reduce_samples(const std::vector<OtocSample>& samples, int n_max) {
    const auto count = static_cast<std::size_t>(n_max) + 1;
    const double m = static_cast<double>(samples.size());
    OtocSeries s;
    s.n.resize(count);
    s.c2.assign(count, 0.0);
    s.c4.assign(count, 0.0);
    s.c.assign(count, 0.0);
    std::vector<double> imag(count, 0.0);
    std::vector<double> raw(count, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        s.n[i] = static_cast<int>(i);
        for (const auto& smp : samples) {
            s.c2[i] += smp.c2[i];
            s.c[i] += smp.c[i];
            imag[i] += smp.imag[i];
            raw[i] += smp.raw_imag[i];
        }
        s.c2[i] /= m;
        s.c[i] /= m;
        s.c4[i] = s.c2[i] - s.c[i];
        s.meta.max_imag_residual = std::max(s.meta.max_imag_residual, std::abs(imag[i] / m));
        s.meta.max_raw_imag = std::max(s.meta.max_raw_imag, std::abs(raw[i] / m));
    }
    if (samples.size() >= 2) {
        s.std_error.assign(count, 0.0);
        for (std::size_t i = 0; i < count; ++i) {
            double ss = 0.0;
            for (const auto& smp : samples) ss += (smp.c[i] - s.c[i]) * (smp.c[i] - s.c[i]);
            s.std_error[i] = std::sqrt(ss / (m - 1.0) / m);
        }
    }
    s.meta.samples = static_cast<int>(samples.size());
    return s;
}

OtocSeries otoc_stochastic(const Propagator& prop, const Observable& w, const Observable& v,
                           int n_max, int n_samples, std::uint64_t seed, int workers) {
    check_pair(prop, w, v);
    if (n_samples < 1) throw ParameterError("need at least one random state");
    if (n_max < 0) throw ParameterError("n_max must be non-negative");
    std::vector<OtocSample> samples(static_cast<std::size_t>(n_samples));
    parallel_for(
        samples.size(),
        [&](std::size_t k) {
            Rng rng = make_stream(seed, "haar", k);
            samples[k] = otoc_single_state(prop, w, v, n_max, haar_state(prop.dim(), rng));
        },
        workers);
    OtocSeries s = reduce_samples(samples, n_max);
    s.c_inf = c_infinity(w, v).value;
    s.meta.params = prop.params();
    s.meta.w_kind = to_string(w.kind());
    s.meta.v_kind = to_string(v.kind());
    s.meta.backend = "stochastic";
    s.meta.seed = seed;
    return s;
}

}  // namespace kotoc
