#include "lvn/core_ops.hpp"

#include <Eigen/SVD>

namespace lvn {

Complex hs_inner(const TruncatedMatrix& a, const TruncatedMatrix& b) {
    if (a.dim() != b.dim())
        throw ShapeError("hs_inner dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
    return (a.entries().conjugate().cwiseProduct(b.entries())).sum();
}

double hs_norm(const TruncatedMatrix& a) {
    // pair (i,j) with (j,i) so the accumulation order is transpose-invariant
    // and hs_norm(adjoint(a)) == hs_norm(a) holds bit-exactly
    const Matrix& m = a.entries();
    const int n = a.dim();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += std::norm(m(i, i));
        for (int j = i + 1; j < n; ++j) sum += std::norm(m(i, j)) + std::norm(m(j, i));
    }
    return std::sqrt(sum);
}

Eigen::VectorXd singular_values(const TruncatedMatrix& a) {
    Eigen::JacobiSVD<Matrix> svd(a.entries());
    return svd.singularValues();
}

double operator_norm(const TruncatedMatrix& a) {
    return singular_values(a)(0);
}

double trace_norm(const TruncatedMatrix& a) {
    return singular_values(a).sum();
}

TruncatedMatrix adjoint(const TruncatedMatrix& a) {
    return TruncatedMatrix(a.entries().adjoint(), a.pad_dim());
}

FiniteRankProjection finite_rank_project(const TruncatedMatrix& a, int n) {
    if (n < 1 || n > a.dim())
        throw ShapeError("finite_rank_project: n = " + std::to_string(n) + " outside 1.." +
                         std::to_string(a.dim()));
    Matrix projected = a.entries();
    projected.bottomRows(a.dim() - n).setZero();
    const double tail = (a.entries() - projected).norm();
    return {TruncatedMatrix(std::move(projected), a.pad_dim()), tail};
}

} // namespace lvn
