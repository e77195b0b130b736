#include "conjlim/modifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conjlim {

Modifier Modifier::identity(Eigen::Index n)
{
    if (n < 1)
        throw Error(ErrorKind::InvalidInput, "modifier: dimension must be positive");
    return Modifier(Kind::Identity, n, Matrix());
}

Modifier Modifier::hadamard(const Matrix& H)
{
    require_square(H, "hadamard modifier");
    return Modifier(Kind::Hadamard, H.rows(), H);
}

Modifier Modifier::J(Eigen::Index n)
{
    if (n < 1)
        throw Error(ErrorKind::InvalidInput, "modifier: dimension must be positive");
    Matrix H = Matrix::Ones(n, n);
    H.diagonal().setZero();
    return Modifier(Kind::Hadamard, n, H);
}

Modifier Modifier::general(const Matrix& L)
{
    require_square(L, "general modifier");
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(L.rows()))));
    if (n * n != L.rows())
        throw Error(ErrorKind::InvalidInput, "general modifier: size must be n^2 x n^2");
    return Modifier(Kind::General, n, L);
}

Matrix Modifier::apply(const Matrix& A) const
{
    if (A.rows() != n_ || A.cols() != n_) {
        std::ostringstream os;
        os << "apply: modifier acts on " << n_ << "x" << n_ << ", got " << A.rows() << "x"
           << A.cols();
        throw Error(ErrorKind::InvalidInput, os.str());
    }
    switch (kind_) {
    case Kind::Identity: return A;
    case Kind::Hadamard: return data_.cwiseProduct(A);
    case Kind::General: {
        Vector v = data_ * A.reshaped();
        return v.reshaped(n_, n_);
    }
    }
    return A;
}

Matrix Modifier::as_linear_map() const
{
    const Eigen::Index nn = n_ * n_;
    switch (kind_) {
    case Kind::Identity: return Matrix::Identity(nn, nn);
    case Kind::Hadamard: {
        Vector h = data_.reshaped();
        return h.asDiagonal();
    }
    case Kind::General: return data_;
    }
    return Matrix();
}

double Modifier::norm() const
{
    switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::Hadamard: return data_.cwiseAbs().maxCoeff();
    case Kind::General: return operator_norm(data_);
    }
    return 1.0;
}

Matrix apply(const Modifier& phi, const Matrix& A)
{
    return phi.apply(A);
}

namespace {

enum class Side { ZAC, CAZ };

MembershipVerdict union_phi(const Matrix& A, const Matrix& Z, const Modifier& phi,
                            const Tolerance& tol, std::uint64_t seed, int draws, Side side)
{
    tol.validate();
    require_square(Z, "in_S_union_phi");
    require_square(A, "in_S_union_phi");
    require_same_shape(A, Z, "in_S_union_phi");
    if (phi.dim() != Z.rows())
        throw Error(ErrorKind::InvalidInput, "in_S_union_phi: modifier dimension mismatch");

    const Eigen::Index n = Z.rows();
    MembershipVerdict v;
    v.randomized = true;
    const double floor =
        tol.residual_abs * std::max(1.0, operator_norm(Z) * operator_norm(A)) * std::max(1.0, phi.norm());
    v.threshold = floor;

    const Subspace K = kernel_basis(Z, tol);
    const Eigen::Index k = K.dim();
    if (k == 0) {
        // ker Z = 0 leaves only C = 0, which satisfies any constraint.
        v.member = true;
        v.witness = Matrix::Zero(n, n);
        return v;
    }
    const Subspace L = kernel_basis(Z.adjoint(), tol);
    if (L.dim() != k)
        throw Error(ErrorKind::InvalidInput, "in_S_union_phi: kernel and cokernel dimensions differ");

    // C = K X L^H; the constraint is linear in vec(X).
    const Matrix left = side == Side::ZAC ? Matrix(Z * A * K.basis) : K.basis;
    const Matrix right = side == Side::ZAC ? Matrix(L.basis.adjoint())
                                           : Matrix(L.basis.adjoint() * A * Z);
    Matrix M(n * n, k * k);
    for (Eigen::Index b = 0; b < k; ++b)
        for (Eigen::Index a = 0; a < k; ++a) {
            const Matrix T = left.col(a) * right.row(b);
            M.col(a + b * k) = phi.apply(T).reshaped();
        }
    const Subspace X = kernel_basis(M, tol, floor);
    const auto product = [&](const Matrix& C) {
        return side == Side::ZAC ? Matrix(Z * A * C) : Matrix(C * A * Z);
    };

    if (X.dim() > 0) {
        Rng rng(seed);
        for (int d = 0; d < draws; ++d) {
            const Vector coeffs = rng.ginibre(X.dim(), 1);
            const Matrix Xm = (X.basis * coeffs).reshaped(k, k);
            Eigen::JacobiSVD<Matrix> svd(Xm);
            const auto& s = svd.singularValues();
            if (s(k - 1) > 1e-8 * s(0)) {
                const Matrix C = K.basis * Xm * L.basis.adjoint();
                v.member = true;
                v.residual = operator_norm(phi.apply(product(C))) / operator_norm(C);
                v.witness = C;
                return v;
            }
        }
    }
    const Matrix C0 = K.basis * L.basis.adjoint();
    const Matrix P = phi.apply(product(C0));
    v.member = false;
    v.residual = operator_norm(P);
    v.witness = P;
    return v;
}

} // namespace

MembershipVerdict in_S_union_phi(const Matrix& A, const Matrix& Z, const Modifier& phi,
                                 const Tolerance& tol, std::uint64_t seed, int draws)
{
    return union_phi(A, Z, phi, tol, seed, draws, Side::ZAC);
}

MembershipVerdict in_S_union_phi_dual(const Matrix& A, const Matrix& Z, const Modifier& phi,
                                      const Tolerance& tol, std::uint64_t seed, int draws)
{
    return union_phi(A, Z, phi, tol, seed, draws, Side::CAZ);
}

MembershipVerdict in_S_C_phi(const Matrix& A, const Matrix& Z, const Matrix& C,
                             const Modifier& phi, const Tolerance& tol)
{
    // Reuse the precondition check and threshold of the plain test.
    MembershipVerdict base = in_S_C(A, Z, C, tol);
    const Matrix P = phi.apply(Z * A * C);
    MembershipVerdict v;
    v.threshold = base.threshold * std::max(1.0, phi.norm());
    v.residual = operator_norm(P);
    v.member = v.residual <= v.threshold;
    if (!v.member)
        v.witness = P;
    return v;
}

namespace {

// Looks for T = Q Y Qp^H with phi(T) = 0, where Q spans W and Qp spans W^perp.
// Every such T squares to zero, and every square-zero T arises for W = im T.
std::optional<Matrix> search_square_zero(const Modifier& phi, const Matrix& Q, const Matrix& Qp,
                                         const Tolerance& tol)
{
    const Eigen::Index n = phi.dim();
    const Eigen::Index m = Q.cols();
    const Eigen::Index p = Qp.cols();
    Matrix M(n * n, m * p);
    for (Eigen::Index b = 0; b < p; ++b)
        for (Eigen::Index a = 0; a < m; ++a)
            M.col(a + b * m) = phi.apply(Q.col(a) * Qp.col(b).adjoint()).reshaped();
    const double floor = tol.residual_abs * std::max(1.0, phi.norm());
    const Subspace ker = kernel_basis(M, tol, floor);
    if (ker.dim() == 0)
        return std::nullopt;
    const Matrix Y = ker.basis.col(0).reshaped(m, p);
    Matrix T = Q * Y * Qp.adjoint();
    T /= operator_norm(T);
    return T;
}

} // namespace

FaithfulnessResult nilpotent_falsify(const Modifier& phi, const Tolerance& tol, std::uint64_t seed,
                                     int trials)
{
    tol.validate();
    const Eigen::Index n = phi.dim();
    FaithfulnessResult res;
    res.exact = false;
    if (n < 2)
        return res;
    const Matrix I = Matrix::Identity(n, n);

    const auto try_mask = [&](unsigned long mask) -> std::optional<Matrix> {
        std::vector<Eigen::Index> in, out;
        for (Eigen::Index i = 0; i < n; ++i)
            ((mask >> i) & 1UL ? in : out).push_back(i);
        Matrix Q(n, static_cast<Eigen::Index>(in.size()));
        Matrix Qp(n, static_cast<Eigen::Index>(out.size()));
        for (std::size_t c = 0; c < in.size(); ++c)
            Q.col(static_cast<Eigen::Index>(c)) = I.col(in[c]);
        for (std::size_t c = 0; c < out.size(); ++c)
            Qp.col(static_cast<Eigen::Index>(c)) = I.col(out[c]);
        return search_square_zero(phi, Q, Qp, tol);
    };

    Rng rng(seed);
    // Coordinate subspaces first: they contain every elementary square-zero matrix.
    if (n <= 12) {
        const unsigned long full = (1UL << n) - 1;
        for (unsigned long mask = 1; mask < full; ++mask)
            if (auto T = try_mask(mask)) {
                res.faithful = false;
                res.counterexample = *T;
                return res;
            }
    } else {
        for (int t = 0; t < trials; ++t) {
            unsigned long mask = 0;
            while (mask == 0 || mask == (1UL << n) - 1) {
                mask = 0;
                for (Eigen::Index i = 0; i < n; ++i)
                    if (rng.bernoulli(0.5))
                        mask |= 1UL << i;
            }
            if (auto T = try_mask(mask)) {
                res.faithful = false;
                res.counterexample = *T;
                return res;
            }
        }
    }
    // Splits suggested by ker phi itself: W spanned by leading left singular
    // vectors of kernel elements, which is exact when the kernel is spanned
    // by square-zero matrices.
    const Subspace kphi =
        kernel_basis(phi.as_linear_map(), tol, tol.residual_abs * std::max(1.0, phi.norm()));
    if (kphi.dim() == 0)
        return res;
    for (int t = 0; t < trials; ++t) {
        Vector v = kphi.basis.col(t % kphi.dim());
        if (t >= kphi.dim())
            v = kphi.basis * rng.ginibre(kphi.dim(), 1);
        const Matrix K0 = v.reshaped(n, n);
        Eigen::JacobiSVD<Matrix> svd(K0, Eigen::ComputeFullU);
        for (Eigen::Index m = 1; m < n; ++m)
            if (auto T = search_square_zero(phi, svd.matrixU().leftCols(m), svd.matrixU().rightCols(n - m), tol)) {
                res.faithful = false;
                res.counterexample = *T;
                return res;
            }
    }
    for (int t = 0; t < trials; ++t) {
        const Eigen::Index m = rng.uniform_int(1, static_cast<int>(n) - 1);
        const Matrix Uq = random_unitary(rng, n);
        if (auto T = search_square_zero(phi, Uq.leftCols(m), Uq.rightCols(n - m), tol)) {
            res.faithful = false;
            res.counterexample = *T;
            return res;
        }
    }
    return res;
}

FaithfulnessResult nilpotent_faithful(const Modifier& phi, const Tolerance& tol, std::uint64_t seed,
                                      int trials)
{
    FaithfulnessResult res;
    switch (phi.kind()) {
    case Modifier::Kind::Identity:
        res.exact = true;
        return res;
    case Modifier::Kind::Hadamard: {
        res.exact = true;
        const Matrix& H = phi.H();
        for (Eigen::Index i = 0; i < H.rows(); ++i)
            for (Eigen::Index j = 0; j < H.cols(); ++j)
                if (i != j && H(i, j) == 0.0) {
                    res.faithful = false;
                    res.counterexample = elementary(H.rows(), i, j);
                    return res;
                }
        return res;
    }
    case Modifier::Kind::General: return nilpotent_falsify(phi, tol, seed, trials);
    }
    return res;
}

double GershgorinRegion::excess(cplx z) const
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i)
        best = std::min(best, std::abs(z - centers[i]) - radii[i]);
    return best;
}

GershgorinRegion gershgorin(const Matrix& A)
{
    require_square(A, "gershgorin");
    GershgorinRegion g;
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        g.centers.push_back(A(i, i));
        g.radii.push_back(A.row(i).cwiseAbs().sum() - std::abs(A(i, i)));
    }
    return g;
}

JBound j_norm_bound(const Matrix& A)
{
    const GershgorinRegion g = gershgorin(A);
    Eigen::ComplexEigenSolver<Matrix> es(A, false);
    JBound b;
    for (std::size_t i = 0; i < g.centers.size(); ++i) {
        b.diag_abs_sum += std::abs(g.centers[i]);
        b.radii_sum += g.radii[i];
    }
    b.eig_abs_sum = es.eigenvalues().cwiseAbs().sum();
    b.bound = 2.0 * b.radii_sum + b.eig_abs_sum;
    const double slack = 1e-10 * std::max(1.0, A.cwiseAbs().sum());
    b.holds = b.diag_abs_sum <= b.bound + slack;
    return b;
}

double max_row_sum_norm(const Matrix& A)
{
    return A.cwiseAbs().rowwise().sum().maxCoeff();
}

DiagBoundReport conjugation_diag_bound_check(const std::vector<Matrix>& B_seq, double threshold)
{
    if (B_seq.empty())
        throw Error(ErrorKind::InvalidInput, "conjugation_diag_bound_check: empty family");
    const Matrix& B0 = B_seq.front();
    require_square(B0, "conjugation_diag_bound_check");
    const Eigen::Index n = B0.rows();
    const Modifier J = Modifier::J(n);
    const Vector lam0 = Eigen::ComplexEigenSolver<Matrix>(B0, false).eigenvalues();

    DiagBoundReport r;
    r.c1 = 2.0 * static_cast<double>(n) + 1.0;
    r.c2 = lam0.cwiseAbs().sum();
    for (const Matrix& B : B_seq) {
        require_square(B, "conjugation_diag_bound_check");
        require_same_shape(B, B0, "conjugation_diag_bound_check");
        const Vector lam = Eigen::ComplexEigenSolver<Matrix>(B, false).eigenvalues();
        const double etol = 1e-6 * std::max(1.0, max_row_sum_norm(B));
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::Index best = -1;
            double dist = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j)
                if (!used[static_cast<std::size_t>(j)] && std::abs(lam0(i) - lam(j)) < dist) {
                    dist = std::abs(lam0(i) - lam(j));
                    best = j;
                }
            if (dist > etol)
                throw Error(ErrorKind::NotConjugationFamily,
                            "conjugation_diag_bound_check: spectra differ, family is not a conjugation orbit");
            used[static_cast<std::size_t>(best)] = true;
        }
        r.sup_offdiag = std::max(r.sup_offdiag, max_row_sum_norm(J.apply(B)));
        r.sup_norm = std::max(r.sup_norm, max_row_sum_norm(B));
    }
    if (r.sup_offdiag >= threshold) {
        r.vacuous = true;
        r.holds = true;
        return r;
    }
    const double slack = 1e-9 * std::max(1.0, r.sup_norm);
    r.holds = r.sup_norm <= r.c1 * r.sup_offdiag + r.c2 + slack;
    return r;
}

} // namespace conjlim
