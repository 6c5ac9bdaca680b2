#pragma once

#include <vector>

#include "kotoc/core.hpp"
#include "kotoc/floquet.hpp"

namespace kotoc {

/// Realignment of U on H_A (x) H_B:
///   R[(a, a'), (b, b')] = U[(a, b), (a', b')],
/// rows carrying the A-operator index pair, columns the B pair. The singular values s_i of R
/// give the operator Schmidt weights lambda_i = s_i^2 / (d_A d_B).
template <typename Derived>
CMatrixT<typename Derived::RealScalar> realign(const Eigen::MatrixBase<Derived>& u,
                                               Eigen::Index d_a, Eigen::Index d_b);

/// Linear operator entanglement 1 - sum_i lambda_i^2 = 1 - Tr[(R R^dagger)^2] / d^2,
/// evaluated with one matrix product (no SVD).
double linear_entropy(const CMatrix& u, Eigen::Index d_a, Eigen::Index d_b);

/// Operator Schmidt weights lambda_i, descending (SVD of the realigned matrix).
RVector schmidt_weights(const CMatrix& u, Eigen::Index d_a, Eigen::Index d_b);

struct OpeeSeries {
    std::vector<int> n;
    std::vector<double> e_l;
    std::vector<double> purity;
    /// Filled only when requested; lambda spectrum per n.
    std::vector<RVector> spectra;
    SpinChainParams params;
};

/// E_l[U^n] for 0 <= n <= n_max across the half-chain cut (N <= kDenseCap).
OpeeSeries opee_series(const Propagator& prop, int n_max, bool keep_spectra = false);

}  // namespace kotoc

#include "kotoc/opee_impl.hpp"
