#include "conjlim/criteria.hpp"

#include <algorithm>
#include <sstream>

namespace conjlim {

namespace {

void check_pair(const Matrix& A, const Matrix& Z, const char* what)
{
    require_square(Z, what);
    require_square(A, what);
    require_same_shape(A, Z, what);
}

// First column of R above the threshold, else the top right singular direction.
Matrix pick_witness(const Matrix& basis, const Matrix& R, double threshold)
{
    for (Eigen::Index j = 0; j < R.cols(); ++j)
        if (R.col(j).norm() > threshold)
            return basis.col(j);
    Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeThinV);
    return basis * svd.matrixV().col(0);
}

MembershipVerdict product_verdict(const Matrix& P, double threshold)
{
    MembershipVerdict v;
    v.residual = operator_norm(P);
    v.threshold = threshold;
    v.member = v.residual <= threshold;
    if (!v.member)
        v.witness = P;
    return v;
}

void check_annihilates(const Matrix& Z, const Matrix& C, const Tolerance& tol)
{
    const double scale = tol.residual_abs * std::max(1.0, operator_norm(Z) * operator_norm(C));
    const double zc = operator_norm(Z * C);
    const double cz = operator_norm(C * Z);
    if (zc > scale || cz > scale) {
        std::ostringstream os;
        os << "in_S_C: need ZC = CZ = 0, got ||ZC|| = " << zc << ", ||CZ|| = " << cz;
        throw Error(ErrorKind::PreconditionViolation, os.str());
    }
}

} // namespace

MembershipVerdict in_S_ker(const Matrix& A, const Matrix& Z, const Tolerance& tol)
{
    check_pair(A, Z, "in_S_ker");
    MembershipVerdict v;
    const Subspace K = kernel_basis(Z, tol);
    v.threshold = tol.residual_abs * std::max(1.0, operator_norm(Z) * operator_norm(A));
    if (K.dim() == 0) {
        v.member = true;
        return v;
    }
    const Matrix R = Z * A * K.basis;
    v.residual = operator_norm(R);
    v.member = v.residual <= v.threshold;
    if (!v.member)
        v.witness = pick_witness(K.basis, R, v.threshold);
    return v;
}

MembershipVerdict in_S_im(const Matrix& A, const Matrix& Z, const Tolerance& tol)
{
    check_pair(A, Z, "in_S_im");
    MembershipVerdict v;
    const Subspace Q = image_basis(Z, tol);
    v.threshold = tol.residual_abs * std::max(1.0, operator_norm(A));
    if (Q.dim() == 0) {
        v.member = true;
        return v;
    }
    const Eigen::Index n = Z.rows();
    const Matrix R = (Matrix::Identity(n, n) - Q.projector()) * A * Q.basis;
    v.residual = operator_norm(R);
    v.member = v.residual <= v.threshold;
    if (!v.member)
        v.witness = pick_witness(Q.basis, R, v.threshold);
    return v;
}

MembershipVerdict in_S_C(const Matrix& A, const Matrix& Z, const Matrix& C, const Tolerance& tol)
{
    check_pair(A, Z, "in_S_C");
    check_pair(C, Z, "in_S_C");
    check_annihilates(Z, C, tol);
    const double thr =
        tol.residual_abs * std::max(1.0, operator_norm(Z) * operator_norm(A) * operator_norm(C));
    return product_verdict(Z * A * C, thr);
}

MembershipVerdict in_S_C_star(const Matrix& A, const Matrix& Z, const Matrix& C,
                              const Tolerance& tol)
{
    check_pair(A, Z, "in_S_C_star");
    check_pair(C, Z, "in_S_C_star");
    check_annihilates(Z, C, tol);
    const double thr =
        tol.residual_abs * std::max(1.0, operator_norm(Z) * operator_norm(A) * operator_norm(C));
    return product_verdict(C * A * Z, thr);
}

long dim_S_ker(long n, long m)
{
    if (n < 1 || m < 0 || m > n)
        throw Error(ErrorKind::InvalidInput, "dim_S_ker: need n >= 1 and 0 <= m <= n");
    return n * n - m * n + m * m;
}

Matrix kernel_adapted_unitary(const Matrix& Z, const Tolerance& tol)
{
    tol.validate();
    require_square(Z, "kernel_adapted_unitary");
    // Right singular vectors are sorted by singular value, so the trailing
    // n - rank columns span ker Z under the same cutoff as kernel_basis.
    Eigen::JacobiSVD<Matrix> svd(Z, Eigen::ComputeFullV);
    return svd.matrixV();
}

std::vector<Matrix> basis_S_ker(const Matrix& Z, const Tolerance& tol)
{
    require_square(Z, "basis_S_ker");
    const Eigen::Index n = Z.rows();
    const Eigen::Index m = numerical_rank(Z, tol);
    const Matrix P = kernel_adapted_unitary(Z, tol);

    // diag(I_m, 0) keeps span{e_m..e_n-1} invariant iff the top-right m x k block vanishes.
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(dim_S_ker(n, m)));
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i < m && j >= m)
                continue;
            out.push_back(P.col(i) * P.col(j).adjoint());
        }
    }
    return out;
}

std::vector<Matrix> conjugate_set_transform(const std::vector<Matrix>& B, const Matrix& P,
                                            const Tolerance& tol)
{
    require_square(P, "conjugate_set_transform");
    Eigen::JacobiSVD<Matrix> svd(P);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= rank_cutoff(s, P.rows(), P.cols(), tol))
        throw Error(ErrorKind::InvalidInput, "conjugate_set_transform: P is singular");
    Eigen::PartialPivLU<Matrix> lu(P);
    std::vector<Matrix> out;
    out.reserve(B.size());
    for (const Matrix& b : B) {
        require_same_shape(b, P, "conjugate_set_transform");
        out.push_back(lu.solve(b * P));
    }
    return out;
}

bool kernel_criterion_unbounded(const Matrix& A, const Matrix& Z, const Tolerance& tol)
{
    return !in_S_ker(A, Z, tol).member;
}

} // namespace conjlim
