#pragma once

#include "kotoc/error.hpp"

namespace kotoc {

template <typename Derived>
CMatrixT<typename Derived::RealScalar> realign(const Eigen::MatrixBase<Derived>& u,
                                               Eigen::Index d_a, Eigen::Index d_b) {
    if (u.rows() != d_a * d_b || u.cols() != d_a * d_b) {
        throw DimensionError("operator dimension does not factor as d_A * d_B");
    }
    CMatrixT<typename Derived::RealScalar> r(d_a * d_a, d_b * d_b);
    for (Eigen::Index ap = 0; ap < d_a; ++ap) {
        for (Eigen::Index bp = 0; bp < d_b; ++bp) {
            const Eigen::Index col_u = ap * d_b + bp;
            for (Eigen::Index a = 0; a < d_a; ++a) {
                for (Eigen::Index b = 0; b < d_b; ++b) {
                    r(a * d_a + ap, b * d_b + bp) = u(a * d_b + b, col_u);
                }
            }
        }
    }
    return r;
}

}  // namespace kotoc
