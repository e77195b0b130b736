#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "conjlim/criteria.hpp"

namespace conjlim {

/// A linear map phi on n x n matrices applied before taking norms.
/// General maps act on column-major vec(A).
class Modifier {
public:
    enum class Kind { Identity, Hadamard, General };

    static Modifier identity(Eigen::Index n);
    static Modifier hadamard(const Matrix& H);
    /// Hadamard product with 1 - I, i.e. deletes the diagonal.
    static Modifier J(Eigen::Index n);
    static Modifier general(const Matrix& L);

    Kind kind() const { return kind_; }
    Eigen::Index dim() const { return n_; }
    const Matrix& H() const { return data_; }
    const Matrix& L() const { return data_; }

    Matrix apply(const Matrix& A) const;
    /// n^2 x n^2 matrix of phi on column-major vectorizations.
    Matrix as_linear_map() const;
    /// Operator norm of phi as a map on (C^{n x n}, Frobenius).
    double norm() const;

private:
    Modifier(Kind k, Eigen::Index n, Matrix data) : kind_(k), n_(n), data_(std::move(data)) {}
    Kind kind_;
    Eigen::Index n_;
    Matrix data_;
};

Matrix apply(const Modifier& phi, const Matrix& A);

/// Does some C with im C = ker Z and ker C = im Z satisfy phi(Z A C) = 0?
/// Randomized over the solution subspace; the witness on success is C.
MembershipVerdict in_S_union_phi(const Matrix& A, const Matrix& Z, const Modifier& phi,
                                 const Tolerance& tol, std::uint64_t seed, int draws = 16);
/// Same with the constraint phi(C A Z) = 0.
MembershipVerdict in_S_union_phi_dual(const Matrix& A, const Matrix& Z, const Modifier& phi,
                                      const Tolerance& tol, std::uint64_t seed, int draws = 16);
/// phi(Z A C) = 0 for one given C.
MembershipVerdict in_S_C_phi(const Matrix& A, const Matrix& Z, const Matrix& C,
                             const Modifier& phi, const Tolerance& tol = {});

struct FaithfulnessResult {
    bool faithful = true;
    std::optional<Matrix> counterexample; // T != 0 with T^2 = 0 and phi(T) = 0
    bool exact = false;                   // false for the randomized search
};

/// phi(T) = 0 with T^2 = 0 forces T = 0. Exact for identity and Hadamard
/// modifiers; general maps go through a search over square-zero subspaces.
FaithfulnessResult nilpotent_faithful(const Modifier& phi, const Tolerance& tol,
                                      std::uint64_t seed, int trials = 64);
/// The search used for general maps, callable for any kind.
FaithfulnessResult nilpotent_falsify(const Modifier& phi, const Tolerance& tol, std::uint64_t seed,
                                     int trials = 64);

struct GershgorinRegion {
    std::vector<cplx> centers;
    std::vector<double> radii;

    /// Smallest amount by which z misses the union of disks (<= 0 inside).
    double excess(cplx z) const;
};

GershgorinRegion gershgorin(const Matrix& A);

struct JBound {
    double bound = 0.0;        // 2 * sum R_j + sum |lambda_i|
    double diag_abs_sum = 0.0; // sum |a_ii|
    double radii_sum = 0.0;
    double eig_abs_sum = 0.0;
    bool holds = false;
};

/// Diagonal mass controlled by Gershgorin radii and eigenvalue moduli.
JBound j_norm_bound(const Matrix& A);

struct DiagBoundReport {
    bool holds = true;
    bool vacuous = false; // sup ||J*B_k|| reached the threshold
    double sup_offdiag = 0.0;
    double sup_norm = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

/// Checks sup ||B_k|| <= c1 sup ||J*B_k|| + c2 with c1 = 2n+1 and
/// c2 = sum |lambda_i(B_0)| in the max-row-sum norm, for a family of
/// similar matrices. The implication is vacuous once sup ||J*B_k|| >= threshold.
/// Throws NotConjugationFamily when spectra disagree.
DiagBoundReport conjugation_diag_bound_check(const std::vector<Matrix>& B_seq,
                                             double threshold = 1e12);

/// Max absolute row sum.
double max_row_sum_norm(const Matrix& A);

} // namespace conjlim
