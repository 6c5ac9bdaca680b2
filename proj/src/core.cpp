#include "kotoc/core.hpp"

#include <sstream>

#include "kotoc/error.hpp"

namespace kotoc {

void validate(const SpinChainParams& params, int cap) {
    if (params.n_sites < 2 || params.n_sites % 2 != 0) {
        throw ParameterError("chain length must be even and at least 2, got N=" +
                             std::to_string(params.n_sites));
    }
    if (params.n_sites > cap) {
        throw ParameterError("N=" + std::to_string(params.n_sites) + " exceeds the cap of " +
                             std::to_string(cap) + " for this backend");
    }
    if (!(params.tau > 0.0)) {
        throw ParameterError("Floquet period tau must be positive");
    }
}

std::string describe(const SpinChainParams& params) {
    std::ostringstream os;
    os.precision(17);
    os << "N=" << params.n_sites << " J_x=" << params.j_x << " h_x=" << params.h_x
       << " h_z=" << params.h_z << " tau=" << params.tau;
    return os.str();
}

std::uint64_t reverse_bits(std::uint64_t index, int n_sites) {
    std::uint64_t out = 0;
    for (int b = 0; b < n_sites; ++b) {
        out = (out << 1) | ((index >> b) & 1u);
    }
    return out;
}

std::vector<std::uint32_t> bit_reversal(int n_sites) {
    if (n_sites < 1 || n_sites > 31) {
        throw ParameterError("bit reversal needs 1 <= N <= 31");
    }
    const std::size_t dim = std::size_t{1} << n_sites;
    std::vector<std::uint32_t> perm(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        perm[s] = static_cast<std::uint32_t>(reverse_bits(s, n_sites));
    }
    return perm;
}

std::string to_string(Side side) { return side == Side::A ? "A" : "B"; }

std::string to_string(ObservableKind kind) {
    switch (kind) {
        case ObservableKind::SpinBlock: return "spin-block";
        case ObservableKind::GueBlock: return "gue-block";
        case ObservableKind::ExplicitDense: return "explicit";
    }
    return "unknown";
}

Observable Observable::spin_block(int n_sites, Side side) {
    validate(SpinChainParams{.n_sites = n_sites});
    return Observable(ObservableKind::SpinBlock, side, n_sites, CMatrix());
}

Observable Observable::from_block(int n_sites, Side side, CMatrix block, ObservableKind kind) {
    validate(SpinChainParams{.n_sites = n_sites});
    if (kind == ObservableKind::SpinBlock) {
        throw ParameterError("spin-block observables carry no payload");
    }
    const std::int64_t bd = std::int64_t{1} << (n_sites / 2);
    if (block.rows() != bd || block.cols() != bd) {
        throw DimensionError("block payload must be " + std::to_string(bd) + "x" +
                             std::to_string(bd));
    }
    if ((block - block.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw ParameterError("observable payload is not Hermitian");
    }
    return Observable(kind, side, n_sites, std::move(block));
}

Complex Observable::trace() const {
    if (kind_ == ObservableKind::SpinBlock) return {0.0, 0.0};
    return block_.trace() * static_cast<double>(block_dim());
}

double Observable::trace_of_square() const {
    if (kind_ == ObservableKind::SpinBlock) {
        // sigma^x_l sigma^x_l' is traceless for l != l'.
        return 2.0 / n_sites_ * static_cast<double>(dim());
    }
    return block_.squaredNorm() * static_cast<double>(block_dim());
}

bool Observable::is_traceless(double tol) const {
    return std::abs(trace()) <= tol * static_cast<double>(dim());
}

Observable build_block_observable(const SpinChainParams& params, Side side) {
    return Observable::spin_block(params.n_sites, side);
}

namespace {

void spin_block_kernel(const Observable& obs, const Complex* in, Complex* out) {
    const int n = obs.n_sites();
    const std::int64_t dim = obs.dim();
    const int first = obs.side() == Side::A ? 1 : n / 2 + 1;
    std::vector<std::uint64_t> masks;
    for (int l = first; l < first + n / 2; ++l) masks.push_back(site_mask(n, l));
    const double scale = 2.0 / n;
    for (std::int64_t s = 0; s < dim; ++s) {
        Complex acc{0.0, 0.0};
        for (auto m : masks) acc += in[s ^ m];
        out[s] = scale * acc;
    }
}

// The amplitude index is a * D + b with a the side-A block index, so a column-major D x D
// view M has M(b, a) = psi[a * D + b].
void block_kernel(const Observable& obs, const Complex* in, Complex* out) {
    const Eigen::Index bd = obs.block_dim();
    Eigen::Map<const CMatrix> m_in(in, bd, bd);
    Eigen::Map<CMatrix> m_out(out, bd, bd);
    if (obs.side() == Side::A) {
        m_out.noalias() = m_in * obs.block().transpose();
    } else {
        m_out.noalias() = obs.block() * m_in;
    }
}

void apply_kernel(const Observable& obs, const Complex* in, Complex* out) {
    if (obs.kind() == ObservableKind::SpinBlock) {
        spin_block_kernel(obs, in, out);
    } else {
        block_kernel(obs, in, out);
    }
}

}  // namespace

CVector apply_observable(const Observable& obs, const CVector& psi) {
    if (psi.size() != obs.dim()) {
        throw DimensionError("state of size " + std::to_string(psi.size()) +
                             " does not match observable dimension " + std::to_string(obs.dim()));
    }
    CVector out(psi.size());
    apply_kernel(obs, psi.data(), out.data());
    return out;
}

CMatrix apply_observable(const Observable& obs, const CMatrix& x) {
    if (x.rows() != obs.dim()) {
        throw DimensionError("operand rows do not match observable dimension");
    }
    CMatrix out(x.rows(), x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        apply_kernel(obs, x.col(c).data(), out.col(c).data());
    }
    return out;
}

CMatrix dense_realization(const Observable& obs) {
    if (obs.n_sites() > kDenseCap) {
        throw ParameterError("dense realization requested above the dense cap");
    }
    return apply_observable(obs, CMatrix(CMatrix::Identity(obs.dim(), obs.dim())));
}

}  // namespace kotoc
