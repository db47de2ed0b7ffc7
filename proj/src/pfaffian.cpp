#include "mbqs/pfaffian.hpp"

#include <cmath>

#include "mbqs/errors.hpp"

namespace mbqs {

cplx pfaffian_unchecked(Eigen::MatrixXcd A) {
    const Eigen::Index n = A.rows();
    if (n == 0) return cplx(1.0, 0.0);
    double sign = 1.0;
    cplx val(1.0, 0.0);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        // full pivot within column k, rows k+1..n-1
        Eigen::Index p = k + 1;
        double best = std::abs(A(p, k));
        for (Eigen::Index r = k + 2; r < n; ++r) {
            const double m = std::abs(A(r, k));
            if (m > best) { best = m; p = r; }
        }
        if (best == 0.0) return cplx(0.0, 0.0);  // exact structural zero
        if (p != k + 1) {
            A.row(k + 1).swap(A.row(p));
            A.col(k + 1).swap(A.col(p));
            sign = -sign;
        }
        val *= A(k, k + 1);
        if (k + 2 < n) {
            const cplx piv = A(k + 1, k);
            const Eigen::Index m = n - (k + 2);
            Eigen::VectorXcd mu = A.block(k + 2, k, m, 1) / piv;
            A.bottomRows(m).noalias() -= mu * A.row(k + 1);
            A.rightCols(m).noalias() -= A.col(k + 1) * mu.transpose();
        }
    }
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
        throw NumericError("pfaffian: non-finite value during elimination");
    return sign * val;
}

cplx pfaffian(const Eigen::MatrixXcd& A, double asym_tol) {
    if (A.rows() != A.cols()) throw ArgumentError("pfaffian: matrix must be square");
    if (A.rows() % 2 != 0) throw ArgumentError("pfaffian: dimension must be even");
    if (A.rows() == 0) return cplx(1.0, 0.0);
    if (!A.allFinite()) throw NumericError("pfaffian: input contains NaN/Inf");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    const double asym = (A + A.transpose()).cwiseAbs().maxCoeff();
    if (asym > asym_tol * scale)
        throw ArgumentError("pfaffian: matrix is not antisymmetric (|A+A^T|max = " +
                            std::to_string(asym) + ")");
    return pfaffian_unchecked(A);
}

} // namespace mbqs
