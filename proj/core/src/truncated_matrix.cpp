#include "lvn/truncated_matrix.hpp"

#include <cmath>

namespace lvn {

namespace {

bool all_finite(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const Complex& v = m(i, j);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        }
    return true;
}

} // namespace

TruncatedMatrix::TruncatedMatrix(Matrix entries, int pad_dim)
    : entries_(std::move(entries)), pad_dim_(pad_dim) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
        throw ShapeError("TruncatedMatrix requires a nonempty square matrix, got " +
                         std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
    if (pad_dim_ == 0) pad_dim_ = dim();
    if (pad_dim_ < dim())
        throw ShapeError("pad_dim " + std::to_string(pad_dim_) + " smaller than dim " +
                         std::to_string(dim()));
    if (!all_finite(entries_))
        throw ShapeError("TruncatedMatrix entries must be finite");
}

Complex TruncatedMatrix::entry(int m, int n) const {
    if (m < 1 || m > dim() || n < 1 || n > dim())
        throw ShapeError("entry index (" + std::to_string(m) + "," + std::to_string(n) +
                         ") outside 1.." + std::to_string(dim()));
    return entries_(m - 1, n - 1);
}

TruncatedMatrix TruncatedMatrix::zero(int dim) {
    return TruncatedMatrix(Matrix::Zero(dim, dim));
}

TruncatedMatrix TruncatedMatrix::identity(int dim) {
    return TruncatedMatrix(Matrix::Identity(dim, dim));
}

TruncatedMatrix TruncatedMatrix::basis_unit(int dim, int m, int n) {
    if (m < 1 || m > dim || n < 1 || n > dim)
        throw ShapeError("basis_unit index outside 1..dim");
    Matrix e = Matrix::Zero(dim, dim);
    e(m - 1, n - 1) = Complex(1.0, 0.0);
    return TruncatedMatrix(std::move(e));
}

DensityMatrix::DensityMatrix(TruncatedMatrix base, double trace_tolerance)
    : base_(std::move(base)), trace_tolerance_(trace_tolerance) {
    if (trace_tolerance_ < 0.0)
        throw ShapeError("trace_tolerance must be nonnegative");

    const Matrix& m = base_.entries();
    const double herm_tol = 1e-12;
    const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > herm_tol)
        throw ShapeError("DensityMatrix base not Hermitian: max entrywise deviation " +
                         std::to_string(herm_dev));

    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -trace_tolerance_)
        throw ShapeError("DensityMatrix has eigenvalue " + std::to_string(min_eig) +
                         " below -trace_tolerance");

    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > trace_tolerance_)
        throw ShapeError("DensityMatrix trace " + std::to_string(tr) +
                         " deviates from 1 beyond trace_tolerance");
}

} // namespace lvn
