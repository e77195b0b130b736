#pragma once

#include <optional>
#include <vector>

#include "conjlim/numkit.hpp"

namespace conjlim {

/// Outcome of a membership test. When member is false the witness is set:
/// a violating vector (as an n x 1 matrix) or the nonzero product.
struct MembershipVerdict {
    bool member = false;
    std::optional<Matrix> witness;
    double residual = 0.0;
    double threshold = 0.0;
    bool randomized = false; // false negatives possible when set
};

/// A ker Z subset of ker Z.
MembershipVerdict in_S_ker(const Matrix& A, const Matrix& Z, const Tolerance& tol = {});
/// A im Z subset of im Z.
MembershipVerdict in_S_im(const Matrix& A, const Matrix& Z, const Tolerance& tol = {});
/// Z A C = 0, requires ZC = CZ = 0.
MembershipVerdict in_S_C(const Matrix& A, const Matrix& Z, const Matrix& C, const Tolerance& tol = {});
/// C A Z = 0, same precondition.
MembershipVerdict in_S_C_star(const Matrix& A, const Matrix& Z, const Matrix& C,
                              const Tolerance& tol = {});

/// n^2 - mn + m^2, the dimension of the kernel-preserving algebra of a rank-m matrix.
long dim_S_ker(long n, long m);

/// Explicit basis of {A : A ker Z subset of ker Z}, transported from the
/// block form [[X, 0], [Y, W]] of diag(I_m, 0) by a unitary change of basis.
std::vector<Matrix> basis_S_ker(const Matrix& Z, const Tolerance& tol = {});

/// {P^-1 B_i P}. Throws InvalidInput when P is numerically singular.
std::vector<Matrix> conjugate_set_transform(const std::vector<Matrix>& B, const Matrix& P,
                                            const Tolerance& tol = {});

/// True when A moves some kernel vector of Z out of the kernel, which forces
/// divergence along every approach path.
bool kernel_criterion_unbounded(const Matrix& A, const Matrix& Z, const Tolerance& tol = {});

/// Unitary P whose last n - rank columns span ker Z.
Matrix kernel_adapted_unitary(const Matrix& Z, const Tolerance& tol = {});

} // namespace conjlim
