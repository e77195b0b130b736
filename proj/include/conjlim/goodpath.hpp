#pragma once

#include <vector>

#include "conjlim/numkit.hpp"

namespace conjlim {

/// Path Z + sum_k t^k E[k-1] whose inverse is Cneg / t + sum_k t^k Cpos[k].
struct GoodPath {
    Matrix Z;
    std::vector<Matrix> E;    // E_1 .. E_p
    Matrix Cneg;              // C_{-1}
    std::vector<Matrix> Cpos; // C_0 .. C_N
    int order = 0;            // N

    /// C_{-1} = 0, i.e. the base point is invertible and the inverse is analytic.
    bool pole_free(const Tolerance& tol = {}) const;
    Eigen::Index dim() const { return Z.rows(); }
};

struct PolarFactors {
    Matrix U; // unitary
    Matrix R; // sqrt(Z^H Z)
};

/// Coefficient residuals of both products (path)(inverse) - I for orders
/// t^-1 .. t^N, maximum over orders, relative to the coefficient norms.
struct ProductResiduals {
    double left = 0.0;
    double right = 0.0;
    double max() const { return left > right ? left : right; }
};

/// Z = U R with R Hermitian PSD and U unitary. U maps im R isometrically
/// onto im Z and ker R onto (im Z)^perp.
PolarFactors sharpened_polar(const Matrix& Z, const Tolerance& tol = {});

/// Linear good path Z + tE built from the polar factors: with R = V (R11 + 0) V^H,
/// E = U V (0 + I_k) V^H, C_{-1} = V (0 + I_k) V^H U^-1, C_0 = V (R11^-1 + 0) V^H U^-1.
GoodPath construct_good_path(const Matrix& Z, const Tolerance& tol = {}, int order = 8);

/// Solves for the Laurent coefficients of (Z + sum t^k E_k)^-1 assuming at
/// most a simple pole. Throws NotAGoodPath when the stacked coefficient
/// equations are inconsistent (relative residual above 1e-6) and InvalidPath
/// when the path is singular at every sampled small t.
GoodPath laurent_inverse(const Matrix& Z, const std::vector<Matrix>& E, int order = 8,
                         const Tolerance& tol = {});

ProductResiduals product_residuals(const GoodPath& gp);

/// im C = ker Z and ker C = im Z.
bool in_C_prime(const Matrix& C, const Matrix& Z, const Tolerance& tol = {});

/// Exchanges the roles of base point and pole coefficient: the path
/// C_{-1} + sum t^k C_{k-1} has inverse Z / t + sum t^k E_{k+1}.
GoodPath dual_path(const GoodPath& gp);

/// Least n >= 1 with ker E0 inside ker E_m for every m < n and
/// ker E0 cap ker E_n = 0, without checking that the path is good.
int rigidity_index(const Matrix& E0, const std::vector<Matrix>& E, const Tolerance& tol = {});

/// rigidity_index after confirming the path is good via laurent_inverse.
int verify_rigidity(const Matrix& E0, const std::vector<Matrix>& E, const Tolerance& tol = {});

/// Evaluates Z + sum t^k E_k.
Matrix path_at(const Matrix& Z, const std::vector<Matrix>& E, cplx t);

} // namespace conjlim
