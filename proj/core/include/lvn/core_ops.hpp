#ifndef LVN_CORE_OPS_HPP
#define LVN_CORE_OPS_HPP

#include "lvn/truncated_matrix.hpp"

namespace lvn {

/// Hilbert-Schmidt inner product <A,B> = sum_n <A e_n, B e_n>
///                                     = sum_{m,n} conj(a_mn) b_mn.
/// Conjugate-symmetric; throws ShapeError on dimension mismatch.
Complex hs_inner(const TruncatedMatrix& a, const TruncatedMatrix& b);

/// Hilbert-Schmidt norm: sqrt(<A,A>), i.e. the entrywise root-sum-square.
double hs_norm(const TruncatedMatrix& a);

/// Largest singular value. Satisfies operator_norm <= hs_norm.
double operator_norm(const TruncatedMatrix& a);

/// Sum of singular values, tr|A|. Satisfies hs_norm <= trace_norm.
double trace_norm(const TruncatedMatrix& a);

/// Conjugate transpose. Preserves pad_dim and the HS norm exactly.
TruncatedMatrix adjoint(const TruncatedMatrix& a);

struct FiniteRankProjection {
    TruncatedMatrix projected; // P_n A: rows beyond n zeroed
    double tail;               // ||A - P_n A||_HS
};

/// Rank-n truncation A_n = P_n A. The tail satisfies
/// tail^2 = sum_{m>n} ||A* e_m||^2 (sum of squared norms of removed rows).
/// Throws ShapeError unless 1 <= n <= a.dim().
FiniteRankProjection finite_rank_project(const TruncatedMatrix& a, int n);

/// Singular values, descending. Plain dense SVD; desk scale only (N <= 512).
Eigen::VectorXd singular_values(const TruncatedMatrix& a);

} // namespace lvn

#endif
