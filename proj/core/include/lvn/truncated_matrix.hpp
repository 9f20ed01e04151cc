#ifndef LVN_TRUNCATED_MATRIX_HPP
#define LVN_TRUNCATED_MATRIX_HPP

#include <complex>

#include <Eigen/Dense>

#include "lvn/errors.hpp"

namespace lvn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// A concrete complex N x N realization of an operator on the span of the
/// first N basis vectors. Indices are 1-based in all documentation and in the
/// `entry` accessor; storage is a plain dense matrix. `pad_dim` records the
/// inner dimension used when the matrix arose from a product of truncations
/// (equal to N for native realizations).
class TruncatedMatrix {
public:
    explicit TruncatedMatrix(Matrix entries, int pad_dim = 0);

    int dim() const { return static_cast<int>(entries_.rows()); }
    int pad_dim() const { return pad_dim_; }
    const Matrix& entries() const { return entries_; }

    /// 1-based element access: entry(m, n) = <e_m, A e_n>.
    Complex entry(int m, int n) const;

    static TruncatedMatrix zero(int dim);
    static TruncatedMatrix identity(int dim);
    /// Matrix unit e_{mn} (1-based): single 1 in row m, column n.
    static TruncatedMatrix basis_unit(int dim, int m, int n);

private:
    Matrix entries_;
    int pad_dim_;
};

/// Truncation of a density operator: Hermitian, positive up to
/// `trace_tolerance`, trace within `trace_tolerance` of 1. Renormalized
/// truncations of infinite-rank states carry the tolerance they were built
/// with; the invariants are validated on construction.
class DensityMatrix {
public:
    DensityMatrix(TruncatedMatrix base, double trace_tolerance);

    const TruncatedMatrix& base() const { return base_; }
    double trace_tolerance() const { return trace_tolerance_; }

private:
    TruncatedMatrix base_;
    double trace_tolerance_;
};

} // namespace lvn

#endif
