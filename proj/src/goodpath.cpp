#include "conjlim/goodpath.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conjlim {

namespace {

constexpr double kLaurentRelResidual = 1e-6;

const Matrix* coef_or_null(const std::vector<Matrix>& v, long k)
{
    if (k < 0 || k >= static_cast<long>(v.size()))
        return nullptr;
    return &v[static_cast<std::size_t>(k)];
}

// Path coefficient of t^k with E_0 = Z; null when zero.
const Matrix* path_coef(const Matrix& Z, const std::vector<Matrix>& E, long k)
{
    return k == 0 ? &Z : coef_or_null(E, k - 1);
}

// Inverse coefficient of t^k with C_{-1} = Cneg; null when zero.
const Matrix* inv_coef(const Matrix& Cneg, const std::vector<Matrix>& C, long k)
{
    return k == -1 ? &Cneg : coef_or_null(C, k);
}

void check_path(const Matrix& Z, const std::vector<Matrix>& E, const char* what)
{
    require_square(Z, what);
    for (const Matrix& e : E) {
        require_finite(e, what);
        require_same_shape(e, Z, what);
    }
}

} // namespace

bool GoodPath::pole_free(const Tolerance& tol) const
{
    return operator_norm(Cneg) <= tol.residual_abs;
}

Matrix path_at(const Matrix& Z, const std::vector<Matrix>& E, cplx t)
{
    Matrix U = Z;
    cplx tk = 1.0;
    for (const Matrix& e : E) {
        tk *= t;
        U += tk * e;
    }
    return U;
}

PolarFactors sharpened_polar(const Matrix& Z, const Tolerance& tol)
{
    tol.validate();
    require_square(Z, "sharpened_polar");
    Eigen::JacobiSVD<Matrix> svd(Z, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Matrix& W = svd.matrixU();
    const Matrix& V = svd.matrixV();
    PolarFactors pf;
    // W V^H sends right singular vectors to left ones, including the kernel
    // directions onto the cokernel, so it is unitary.
    pf.U = W * V.adjoint();
    pf.R = V * svd.singularValues().cast<cplx>().asDiagonal() * V.adjoint();
    return pf;
}

GoodPath construct_good_path(const Matrix& Z, const Tolerance& tol, int order)
{
    tol.validate();
    require_square(Z, "construct_good_path");
    if (order < 0)
        throw Error(ErrorKind::InvalidInput, "construct_good_path: order must be >= 0");
    const Eigen::Index n = Z.rows();
    Eigen::JacobiSVD<Matrix> svd(Z, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const Eigen::Index m = numerical_rank(Z, tol);
    const Eigen::Index k = n - m;
    const Matrix& W = svd.matrixU();
    const Matrix& V = svd.matrixV();
    const Matrix U = W * V.adjoint();

    // V diagonalizes R = sqrt(Z^H Z); leading m columns span im R, trailing k span ker R.
    const Matrix Pk = V.rightCols(k) * V.rightCols(k).adjoint();
    Eigen::VectorXcd inv_s(m);
    for (Eigen::Index i = 0; i < m; ++i)
        inv_s(i) = 1.0 / s(i);
    const Matrix R11inv = V.leftCols(m) * inv_s.asDiagonal() * V.leftCols(m).adjoint();

    GoodPath gp;
    gp.Z = Z;
    gp.E = {U * Pk};
    gp.Cneg = Pk * U.adjoint();
    gp.order = order;
    gp.Cpos.assign(static_cast<std::size_t>(order) + 1, Matrix::Zero(n, n));
    gp.Cpos[0] = R11inv * U.adjoint();
    return gp;
}

GoodPath laurent_inverse(const Matrix& Z, const std::vector<Matrix>& E, int order,
                         const Tolerance& tol)
{
    tol.validate();
    check_path(Z, E, "laurent_inverse");
    if (order < 0)
        throw Error(ErrorKind::InvalidInput, "laurent_inverse: order must be >= 0");
    const Eigen::Index n = Z.rows();

    bool invertible_somewhere = false;
    for (double t : {0.1, 0.0371, 0.0113, 0.00297}) {
        Eigen::JacobiSVD<Matrix> svd(path_at(Z, E, t));
        const auto& s = svd.singularValues();
        if (s(n - 1) > rank_cutoff(s, n, n, tol)) {
            invertible_somewhere = true;
            break;
        }
    }
    if (!invertible_somewhere)
        throw Error(ErrorKind::InvalidPath, "laurent_inverse: path is singular at every sampled t");

    // Unknowns X_{-1} .. X_{N+1}. The extra top order makes X_N unique; it is
    // solved for and dropped.
    const long blocks = order + 3;
    const Eigen::Index nn = n * n;
    const Eigen::Index cols = blocks * nn;
    const Eigen::Index rows = 2 * blocks * nn;
    Matrix M = Matrix::Zero(rows, cols);
    Vector b = Vector::Zero(rows);

    for (long j = -1; j <= order + 1; ++j) {
        const Eigen::Index rl = (j + 1) * nn;          // left-product rows for t^j
        const Eigen::Index rr = (blocks + j + 1) * nn; // right-product rows for t^j
        for (long i = 0; i <= j + 1; ++i) {
            const Matrix* Ei = path_coef(Z, E, i);
            if (!Ei)
                continue;
            const Eigen::Index c = (j - i + 1) * nn; // block column of X_{j-i}
            // vec(E X) = (I kron E) vec X; vec(X E) = (E^T kron I) vec X
            for (Eigen::Index q = 0; q < n; ++q)
                M.block(rl + q * n, c + q * n, n, n) += *Ei;
            for (Eigen::Index a = 0; a < n; ++a)
                for (Eigen::Index bb = 0; bb < n; ++bb) {
                    const cplx e = (*Ei)(bb, a);
                    if (e == 0.0)
                        continue;
                    for (Eigen::Index q = 0; q < n; ++q)
                        M(rr + a * n + q, c + bb * n + q) += e;
                }
        }
        if (j == 0) {
            for (Eigen::Index q = 0; q < n; ++q) {
                b(rl + q * n + q) = 1.0;
                b(rr + q * n + q) = 1.0;
            }
        }
    }

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(M);
    const Vector x = cod.solve(b);
    const double rel = (M * x - b).norm() / b.norm();
    if (!(rel <= kLaurentRelResidual)) {
        std::ostringstream os;
        os << "laurent_inverse: no inverse with pole order <= 1 (relative residual " << rel << ")";
        throw Error(ErrorKind::NotAGoodPath, os.str());
    }

    GoodPath gp;
    gp.Z = Z;
    gp.E = E;
    gp.order = order;
    gp.Cneg = x.segment(0, nn).reshaped(n, n);
    for (long l = 0; l <= order; ++l)
        gp.Cpos.push_back(x.segment((l + 1) * nn, nn).reshaped(n, n));
    return gp;
}

ProductResiduals product_residuals(const GoodPath& gp)
{
    const Eigen::Index n = gp.dim();
    const Matrix I = Matrix::Identity(n, n);
    ProductResiduals r;
    for (long j = -1; j <= gp.order; ++j) {
        Matrix left = Matrix::Zero(n, n);
        Matrix right = Matrix::Zero(n, n);
        for (long i = 0; i <= j + 1; ++i) {
            const Matrix* Ei = path_coef(gp.Z, gp.E, i);
            const Matrix* Ci = inv_coef(gp.Cneg, gp.Cpos, j - i);
            if (!Ei || !Ci)
                continue;
            left += (*Ei) * (*Ci);
            right += (*Ci) * (*Ei);
        }
        if (j == 0) {
            left -= I;
            right -= I;
        }
        r.left = std::max(r.left, operator_norm(left));
        r.right = std::max(r.right, operator_norm(right));
    }
    return r;
}

bool in_C_prime(const Matrix& C, const Matrix& Z, const Tolerance& tol)
{
    require_square(C, "in_C_prime");
    require_square(Z, "in_C_prime");
    require_same_shape(C, Z, "in_C_prime");
    return subspace_equal(image_basis(C, tol), kernel_basis(Z, tol), tol) &&
           subspace_equal(image_basis(Z, tol), kernel_basis(C, tol), tol);
}

GoodPath dual_path(const GoodPath& gp)
{
    const Eigen::Index n = gp.dim();
    GoodPath d;
    d.Z = gp.Cneg;
    d.E = gp.Cpos;
    d.Cneg = gp.Z;
    d.order = gp.order;
    for (long k = 0; k <= gp.order; ++k) {
        const Matrix* e = coef_or_null(gp.E, k);
        d.Cpos.push_back(e ? *e : Matrix::Zero(n, n));
    }
    return d;
}

int rigidity_index(const Matrix& E0, const std::vector<Matrix>& E, const Tolerance& tol)
{
    check_path(E0, E, "rigidity_index");
    const Subspace K0 = kernel_basis(E0, tol);
    if (K0.dim() == 0)
        return 1;
    for (std::size_t idx = 0; idx < E.size(); ++idx) {
        const Matrix R = E[idx] * K0.basis;
        const double floor = tol.residual_abs * std::max(1.0, operator_norm(E[idx]));
        if (operator_norm(R) <= floor)
            continue; // ker E0 inside ker E_n, keep going
        const Subspace common = kernel_basis(R, tol, floor);
        if (common.dim() == 0)
            return static_cast<int>(idx) + 1;
        std::ostringstream os;
        os << "rigidity: ker E0 meets ker E" << idx + 1 << " in dimension " << common.dim()
           << " without being contained in it";
        throw Error(ErrorKind::RigidityViolation, os.str());
    }
    throw Error(ErrorKind::RigidityViolation,
                "rigidity: ker E0 is contained in the kernel of every supplied coefficient");
}

int verify_rigidity(const Matrix& E0, const std::vector<Matrix>& E, const Tolerance& tol)
{
    laurent_inverse(E0, E, 2, tol);
    return rigidity_index(E0, E, tol);
}

} // namespace conjlim
