#include "conjlim/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace conjlim {

const char* error_kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::NotPsd: return "not-psd";
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::NotAGoodPath: return "not-a-good-path";
    case ErrorKind::InvalidPath: return "invalid-path";
    case ErrorKind::RigidityViolation: return "rigidity-violation";
    case ErrorKind::PathSingular: return "path-singular";
    case ErrorKind::NotConjugationFamily: return "not-a-conjugation-family";
    case ErrorKind::UnknownSuite: return "unknown-suite";
    case ErrorKind::Parse: return "parse-error";
    }
    return "error";
}

void Tolerance::validate() const
{
    if (!(rank_rel > 0.0 && rank_rel < 1.0) || !(residual_abs > 0.0))
        throw Error(ErrorKind::InvalidInput, "tolerance: need 0 < rank_rel < 1 and residual_abs > 0");
}

Matrix Subspace::projector() const
{
    return basis * basis.adjoint();
}

void require_finite(const Matrix& M, const char* what)
{
    if (M.size() == 0)
        throw Error(ErrorKind::InvalidInput, std::string(what) + ": empty matrix");
    if (!M.allFinite())
        throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite entries");
}

void require_square(const Matrix& M, const char* what)
{
    require_finite(M, what);
    if (M.rows() != M.cols()) {
        std::ostringstream os;
        os << what << ": expected square matrix, got " << M.rows() << "x" << M.cols();
        throw Error(ErrorKind::InvalidInput, os.str());
    }
}

void require_same_shape(const Matrix& A, const Matrix& B, const char* what)
{
    if (A.rows() != B.rows() || A.cols() != B.cols()) {
        std::ostringstream os;
        os << what << ": size mismatch " << A.rows() << "x" << A.cols() << " vs " << B.rows()
           << "x" << B.cols();
        throw Error(ErrorKind::InvalidInput, os.str());
    }
}

double operator_norm(const Matrix& M)
{
    require_finite(M, "operator_norm");
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& M)
{
    require_finite(M, "smallest_singular_value");
    Eigen::JacobiSVD<Matrix> svd(M);
    const auto& s = svd.singularValues();
    return s(s.size() - 1);
}

double rank_cutoff(const Eigen::VectorXd& sigma, Eigen::Index rows, Eigen::Index cols,
                   const Tolerance& tol, double abs_floor)
{
    const double smax = sigma.size() ? sigma(0) : 0.0;
    const double dim = static_cast<double>(std::max(rows, cols));
    return std::max(tol.rank_rel * smax * dim, abs_floor);
}

namespace {

// Number of singular values strictly above the cutoff. sigma(0) == 0 gives 0.
Eigen::Index count_above(const Eigen::VectorXd& s, double cut)
{
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > cut && s(i) > 0.0)
            ++r;
    return r;
}

} // namespace

Eigen::Index numerical_rank(const Matrix& M, const Tolerance& tol, double abs_floor)
{
    require_finite(M, "numerical_rank");
    Eigen::JacobiSVD<Matrix> svd(M);
    const auto& s = svd.singularValues();
    return count_above(s, rank_cutoff(s, M.rows(), M.cols(), tol, abs_floor));
}

Subspace kernel_basis(const Matrix& M, const Tolerance& tol, double abs_floor)
{
    require_finite(M, "kernel_basis");
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = rank_cutoff(s, M.rows(), M.cols(), tol, abs_floor);
    const Eigen::Index r = count_above(s, cut);
    Subspace out;
    out.basis = svd.matrixV().rightCols(M.cols() - r);
    out.tol = cut;
    return out;
}

Subspace image_basis(const Matrix& M, const Tolerance& tol, double abs_floor)
{
    require_finite(M, "image_basis");
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU);
    const auto& s = svd.singularValues();
    const double cut = rank_cutoff(s, M.rows(), M.cols(), tol, abs_floor);
    const Eigen::Index r = count_above(s, cut);
    Subspace out;
    out.basis = svd.matrixU().leftCols(r);
    out.tol = cut;
    return out;
}

bool subspace_equal(const Subspace& S1, const Subspace& S2, const Tolerance& tol)
{
    if (S1.ambient() != S2.ambient())
        throw Error(ErrorKind::InvalidInput, "subspace_equal: ambient dimension mismatch");
    if (S1.dim() != S2.dim())
        return false;
    if (S1.dim() == 0)
        return true;
    const Matrix D = S1.projector() - S2.projector();
    return operator_norm(D) <= tol.residual_abs;
}

bool subspace_contains(const Subspace& outer, const Subspace& inner, const Tolerance& tol)
{
    if (outer.ambient() != inner.ambient())
        throw Error(ErrorKind::InvalidInput, "subspace_contains: ambient dimension mismatch");
    if (inner.dim() == 0)
        return true;
    if (outer.dim() < inner.dim())
        return false;
    const Matrix resid = inner.basis - outer.projector() * inner.basis;
    return operator_norm(resid) <= tol.residual_abs;
}

Subspace intersect(const Subspace& S1, const Subspace& S2, const Tolerance& tol)
{
    if (S1.ambient() != S2.ambient())
        throw Error(ErrorKind::InvalidInput, "intersect: ambient dimension mismatch");
    const Eigen::Index n = S1.ambient();
    Subspace out;
    out.tol = std::max(S1.tol, S2.tol);
    if (S1.dim() == 0 || S2.dim() == 0) {
        out.basis = Matrix(n, 0);
        return out;
    }
    // x = B1 c lies in S2 iff (I - P2) B1 c = 0; B1 orthonormal keeps the result orthonormal.
    const Matrix G = S1.basis - S2.projector() * S1.basis;
    const Subspace coeffs = kernel_basis(G, tol, tol.residual_abs);
    out.basis = S1.basis * coeffs.basis;
    return out;
}

Subspace orthogonal_complement(const Subspace& S, const Tolerance& tol)
{
    const Eigen::Index n = S.ambient();
    if (S.dim() == 0) {
        Subspace out;
        out.basis = Matrix::Identity(n, n);
        out.tol = S.tol;
        return out;
    }
    Subspace out = kernel_basis(S.basis.adjoint(), tol);
    out.tol = S.tol;
    return out;
}

Subspace matrix_span(const std::vector<Matrix>& mats, const Tolerance& tol)
{
    if (mats.empty())
        throw Error(ErrorKind::InvalidInput, "matrix_span: empty list");
    const Eigen::Index sz = mats.front().size();
    Matrix stacked(sz, static_cast<Eigen::Index>(mats.size()));
    for (std::size_t i = 0; i < mats.size(); ++i) {
        if (mats[i].size() != sz)
            throw Error(ErrorKind::InvalidInput, "matrix_span: mixed sizes");
        stacked.col(static_cast<Eigen::Index>(i)) = mats[i].reshaped();
    }
    return image_basis(stacked, tol);
}

Matrix psd_sqrt(const Matrix& M, const Tolerance& tol)
{
    require_square(M, "psd_sqrt");
    const double scale = std::max(1.0, operator_norm(M));
    if (operator_norm(M - M.adjoint()) > tol.residual_abs * scale)
        throw Error(ErrorKind::NotPsd, "psd_sqrt: input is not Hermitian");
    const Matrix H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < -tol.residual_abs * scale) {
            std::ostringstream os;
            os << "psd_sqrt: eigenvalue " << ev(i) << " is negative beyond tolerance";
            throw Error(ErrorKind::NotPsd, os.str());
        }
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    const Matrix& V = es.eigenvectors();
    return V * ev.cast<cplx>().asDiagonal() * V.adjoint();
}

Matrix elementary(Eigen::Index n, Eigen::Index i, Eigen::Index j)
{
    Matrix E = Matrix::Zero(n, n);
    E(i, j) = 1.0;
    return E;
}

Matrix dnm(Eigen::Index n, Eigen::Index m)
{
    if (n <= 0 || m < 0 || m > n)
        throw Error(ErrorKind::InvalidInput, "dnm: need 0 <= m <= n, n >= 1");
    Matrix D = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < m; ++i)
        D(i, i) = 1.0;
    return D;
}

cplx Rng::gaussian()
{
    const double s = std::sqrt(0.5);
    const double re = normal_(eng_);
    const double im = normal_(eng_);
    return {s * re, s * im};
}

double Rng::normal()
{
    return normal_(eng_);
}

double Rng::uniform(double lo, double hi)
{
    std::uniform_real_distribution<double> d(lo, hi);
    return d(eng_);
}

int Rng::uniform_int(int lo, int hi)
{
    std::uniform_int_distribution<int> d(lo, hi);
    return d(eng_);
}

bool Rng::bernoulli(double p)
{
    return uniform() < p;
}

Matrix Rng::ginibre(Eigen::Index rows, Eigen::Index cols)
{
    Matrix G(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            G(i, j) = gaussian();
    return G;
}

Vector Rng::unit_vector(Eigen::Index n)
{
    Vector v = ginibre(n, 1);
    return v / v.norm();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
    // splitmix64 finalizer over the combined state
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Matrix random_rank(Rng& rng, Eigen::Index n, Eigen::Index m)
{
    if (m == 0)
        return Matrix::Zero(n, n);
    return rng.ginibre(n, m) * rng.ginibre(m, n);
}

Matrix random_unitary(Rng& rng, Eigen::Index n)
{
    Eigen::HouseholderQR<Matrix> qr(rng.ginibre(n, n));
    return qr.householderQ() * Matrix::Identity(n, n);
}

Matrix random_invertible(Rng& rng, Eigen::Index n)
{
    for (;;) {
        Matrix P = rng.ginibre(n, n);
        if (smallest_singular_value(P) > 0.1)
            return P;
    }
}

} // namespace conjlim
