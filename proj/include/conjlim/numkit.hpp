#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "conjlim/errors.hpp"

namespace conjlim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Rank and residual cutoffs shared by every module.
///
/// rank_rel is relative to the largest singular value and is additionally
/// scaled by the larger matrix dimension. residual_abs is the absolute
/// residual cutoff used after scaling by the norms of the operands.
struct Tolerance {
    double rank_rel = 1e-10;
    double residual_abs = 1e-8;

    void validate() const;
};

/// Orthonormal-basis representation of a subspace of C^n.
struct Subspace {
    Matrix basis;   // ambient x dim, orthonormal columns
    double tol = 0; // cutoff that produced the basis

    Eigen::Index ambient() const { return basis.rows(); }
    Eigen::Index dim() const { return basis.cols(); }
    Matrix projector() const;
};

void require_finite(const Matrix& M, const char* what);
void require_square(const Matrix& M, const char* what);
void require_same_shape(const Matrix& A, const Matrix& B, const char* what);

/// Largest singular value.
double operator_norm(const Matrix& M);
double smallest_singular_value(const Matrix& M);

/// Singular-value threshold separating "zero" from "nonzero" directions.
/// abs_floor lets callers add an absolute floor when M is known to be a
/// product whose exact value may be zero (pure rounding noise otherwise
/// reads as full rank under a purely relative cutoff).
double rank_cutoff(const Eigen::VectorXd& sigma, Eigen::Index rows, Eigen::Index cols,
                   const Tolerance& tol, double abs_floor = 0.0);

Eigen::Index numerical_rank(const Matrix& M, const Tolerance& tol = {}, double abs_floor = 0.0);
Subspace kernel_basis(const Matrix& M, const Tolerance& tol = {}, double abs_floor = 0.0);
Subspace image_basis(const Matrix& M, const Tolerance& tol = {}, double abs_floor = 0.0);

/// Dims equal and the orthogonal projectors agree within residual_abs.
bool subspace_equal(const Subspace& S1, const Subspace& S2, const Tolerance& tol = {});
/// True when every basis vector of inner lies in outer.
bool subspace_contains(const Subspace& outer, const Subspace& inner, const Tolerance& tol = {});
Subspace intersect(const Subspace& S1, const Subspace& S2, const Tolerance& tol = {});
Subspace orthogonal_complement(const Subspace& S, const Tolerance& tol = {});
/// Orthonormal basis for the span of a list of n x n matrices, vectorized column-major.
Subspace matrix_span(const std::vector<Matrix>& mats, const Tolerance& tol = {});

/// Hermitian PSD square root. Throws NotPsd for eigenvalues below
/// -residual_abs * max(1, ||M||) or for non-Hermitian input.
Matrix psd_sqrt(const Matrix& M, const Tolerance& tol = {});

/// Single 1 at (i, j), zero-based.
Matrix elementary(Eigen::Index n, Eigen::Index i, Eigen::Index j);
/// diag(1,..,1,0,..,0) with m ones.
Matrix dnm(Eigen::Index n, Eigen::Index m);

/// Seeded source of complex Ginibre samples.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    cplx gaussian();
    double normal();
    double uniform(double lo = 0.0, double hi = 1.0);
    int uniform_int(int lo, int hi); // inclusive
    bool bernoulli(double p);
    Matrix ginibre(Eigen::Index rows, Eigen::Index cols);
    Vector unit_vector(Eigen::Index n);
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Stream splitting for reproducible per-case seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Rank-m n x n matrix built from Ginibre factors (n x m)(m x n).
Matrix random_rank(Rng& rng, Eigen::Index n, Eigen::Index m);
Matrix random_unitary(Rng& rng, Eigen::Index n);
/// Ginibre matrix shifted until its smallest singular value exceeds 0.1.
Matrix random_invertible(Rng& rng, Eigen::Index n);

} // namespace conjlim
