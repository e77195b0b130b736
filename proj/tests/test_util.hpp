#pragma once

#include <gtest/gtest.h>

#include "conjlim/numkit.hpp"

namespace conjlim::testing {

inline double max_abs(const Matrix& M)
{
    return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

// Largest singular value by power iteration on M^H M.
inline double power_norm(const Matrix& M, int iters = 500)
{
    Vector v = Vector::Ones(M.cols()).normalized();
    double s = 0.0;
    for (int k = 0; k < iters; ++k) {
        Vector w = M.adjoint() * (M * v);
        const double nw = w.norm();
        if (nw == 0.0)
            return 0.0;
        v = w / nw;
        s = std::sqrt(nw);
    }
    return s;
}

#define EXPECT_MAT_NEAR(A, B, tol) EXPECT_LE(::conjlim::testing::max_abs((A) - (B)), (tol))

} // namespace conjlim::testing
