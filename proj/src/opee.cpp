#include "kotoc/opee.hpp"

#include <algorithm>

#include <Eigen/SVD>

namespace kotoc {

double linear_entropy(const CMatrix& u, Eigen::Index d_a, Eigen::Index d_b) {
    const CMatrix r = realign(u, d_a, d_b);
    const double d = static_cast<double>(d_a * d_b);
    CMatrix gram(r.rows(), r.rows());
    gram.noalias() = r * r.adjoint();
    return 1.0 - gram.squaredNorm() / (d * d);
}

RVector schmidt_weights(const CMatrix& u, Eigen::Index d_a, Eigen::Index d_b) {
    const CMatrix r = realign(u, d_a, d_b);
    Eigen::BDCSVD<CMatrix> svd(r);
    const double d = static_cast<double>(d_a * d_b);
    return svd.singularValues().array().square() / d;
}

OpeeSeries opee_series(const Propagator& prop, int n_max, bool keep_spectra) {
    validate(prop.params(), kDenseCap);
    if (n_max < 0) throw ParameterError("n_max must be non-negative");
    const Eigen::Index bd = prop.params().block_dim();
    const double d = static_cast<double>(prop.dim());
    OpeeSeries out;
    out.params = prop.params();
    CMatrix power = CMatrix::Identity(prop.dim(), prop.dim());
    for (int k = 0; k <= n_max; ++k) {
        if (k > 0) apply_columns(prop, power);  // U^k = U U^{k-1}
        const CMatrix r = realign(power, bd, bd);
        CMatrix gram(r.rows(), r.rows());
        gram.noalias() = r * r.adjoint();
        const double purity = gram.squaredNorm() / (d * d);
        out.n.push_back(k);
        out.purity.push_back(purity);
        out.e_l.push_back(1.0 - purity);
        if (keep_spectra) out.spectra.push_back(schmidt_weights(power, bd, bd));
    }
    return out;
}

}  // namespace kotoc
