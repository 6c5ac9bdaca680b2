#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace kotoc {

template <typename Real>
using ComplexT = std::complex<Real>;
template <typename Real>
using CVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = ComplexT<double>;
using CVector = CVectorT<double>;
using CMatrix = CMatrixT<double>;
using RVector = Eigen::VectorXd;

/// Largest chain handled by the matrix-free (state vector) paths.
inline constexpr int kMatrixFreeCap = 20;
/// Largest chain for which full 2^N x 2^N operators are formed.
inline constexpr int kDenseCap = 12;

/// Kicked Ising chain: H(t) = J_x H_xx + h_x H_x + h_z sum_n delta(n - t/tau) H_z.
struct SpinChainParams {
    int n_sites = 2;
    double j_x = 1.0;
    double h_x = 0.0;
    double h_z = 0.0;
    double tau = 1.0;

    std::int64_t dim() const { return std::int64_t{1} << n_sites; }
    std::int64_t block_dim() const { return std::int64_t{1} << (n_sites / 2); }
    bool operator==(const SpinChainParams&) const = default;
};

/// Throws ParameterError unless N is even, 2 <= N <= cap and tau > 0.
void validate(const SpinChainParams& params, int cap = kMatrixFreeCap);

std::string describe(const SpinChainParams& params);

/// Bit of the computational-basis index that stores site `site` (1-based).
/// Site 1 is the most significant bit.
inline std::uint64_t site_mask(int n_sites, int site) {
    return std::uint64_t{1} << (n_sites - site);
}

/// Index of s_N ... s_1 given the index of s_1 ... s_N.
std::uint64_t reverse_bits(std::uint64_t index, int n_sites);

/// Bit-reversal permutation of {0, ..., 2^N - 1}.
std::vector<std::uint32_t> bit_reversal(int n_sites);

/// Half-chain partition: A holds sites 1..N/2 (high bits), B holds N/2+1..N.
enum class Side { A, B };

enum class ObservableKind { SpinBlock, GueBlock, ExplicitDense };

std::string to_string(Side side);
std::string to_string(ObservableKind kind);

/// Hermitian operator supported on one half of the chain.
///
/// A SpinBlock is the normalized sum (2/N) sum_l sigma^x_l over the sites of its side and
/// carries no matrix. The other kinds carry a block_dim x block_dim Hermitian payload that
/// is embedded as payload (x) I for side A and I (x) payload for side B.
class Observable {
public:
    static Observable spin_block(int n_sites, Side side);
    static Observable from_block(int n_sites, Side side, CMatrix block,
                                 ObservableKind kind = ObservableKind::ExplicitDense);

    ObservableKind kind() const { return kind_; }
    Side side() const { return side_; }
    int n_sites() const { return n_sites_; }
    std::int64_t dim() const { return std::int64_t{1} << n_sites_; }
    std::int64_t block_dim() const { return std::int64_t{1} << (n_sites_ / 2); }
    const CMatrix& block() const { return block_; }

    /// Tr(O) over the full 2^N space.
    Complex trace() const;
    /// Tr(O^2) over the full 2^N space.
    double trace_of_square() const;
    bool is_traceless(double tol = 1e-10) const;

private:
    Observable(ObservableKind kind, Side side, int n_sites, CMatrix block)
        : kind_(kind), side_(side), n_sites_(n_sites), block_(std::move(block)) {}

    ObservableKind kind_;
    Side side_;
    int n_sites_;
    CMatrix block_;
};

/// The spin-block operator (2/N) sum sigma^x over the given half of the chain.
Observable build_block_observable(const SpinChainParams& params, Side side);

/// O * psi. Cost O(N 2^N) for spin blocks, O(2^{3N/2}) for matrix payloads.
CVector apply_observable(const Observable& obs, const CVector& psi);

/// O * X applied to every column of X.
CMatrix apply_observable(const Observable& obs, const CMatrix& x);

/// Full-space matrix of the observable (N <= kDenseCap).
CMatrix dense_realization(const Observable& obs);

}  // namespace kotoc
