#include "conjlim/goodpath.hpp"
#include "conjlim/modifier.hpp"
#include "test_util.hpp"

using namespace conjlim;
using conjlim::testing::max_abs;

TEST(Apply, DiagonalDeletion)
{
    const Modifier J = Modifier::J(3);
    EXPECT_LE(max_abs(J.apply(Matrix::Identity(3, 3))), 0.0);
    EXPECT_EQ(J.apply(elementary(3, 0, 1)), elementary(3, 0, 1));
    EXPECT_DOUBLE_EQ(J.norm(), 1.0);
}

TEST(Apply, GeneralMatchesEntrywise)
{
    Rng rng(1);
    const Matrix H = rng.ginibre(4, 4);
    const Modifier had = Modifier::hadamard(H);
    const Modifier gen = Modifier::general(had.as_linear_map());
    const Matrix A = rng.ginibre(4, 4);
    EXPECT_MAT_NEAR(gen.apply(A), H.cwiseProduct(A), 1e-14);
    EXPECT_MAT_NEAR(apply(had, A), H.cwiseProduct(A), 0.0);
    EXPECT_NEAR(gen.norm(), had.norm(), 1e-12);
    const Modifier idmap = Modifier::general(Matrix::Identity(16, 16));
    EXPECT_MAT_NEAR(idmap.apply(A), A, 0.0);
    EXPECT_MAT_NEAR(Modifier::identity(4).apply(A), A, 0.0);
}

TEST(Apply, ShapeErrors)
{
    EXPECT_THROW(Modifier::general(Matrix::Identity(5, 5)), Error);
    EXPECT_THROW(Modifier::J(3).apply(Matrix::Identity(2, 2)), Error);
}

TEST(UnionMembership, ThreeByThreeExample)
{
    const Matrix Z = dnm(3, 1);
    const Modifier phi = Modifier::hadamard(elementary(3, 0, 2));
    Rng rng(2);
    for (int i = 0; i < 30; ++i) {
        const Matrix A = rng.ginibre(3, 3);
        const MembershipVerdict v = in_S_union_phi(A, Z, phi, {}, 100 + i);
        ASSERT_TRUE(v.member);
        ASSERT_TRUE(v.witness.has_value());
        const Matrix& C = *v.witness;
        EXPECT_TRUE(in_C_prime(C, Z));
        EXPECT_LE(max_abs(phi.apply(Z * A * C)), 1e-10 * std::max(1.0, max_abs(A)));
        // y a12 + w a13 = 0 with (y, w) the last column of C
        EXPECT_LE(std::abs(A(0, 1) * C(1, 2) + A(0, 2) * C(2, 2)), 1e-10 * std::max(1.0, max_abs(A)));
    }
}

TEST(UnionMembership, TransposedExampleDual)
{
    const Matrix Z = dnm(3, 1);
    const Modifier phi = Modifier::hadamard(elementary(3, 2, 0));
    Rng rng(3);
    for (int i = 0; i < 20; ++i)
        EXPECT_TRUE(in_S_union_phi_dual(rng.ginibre(3, 3), Z, phi, {}, i).member);
}

TEST(UnionMembership, IdentityDualAlwaysHolds)
{
    Rng rng(4);
    for (int i = 0; i < 10; ++i) {
        const int n = rng.uniform_int(2, 5);
        const Matrix Z = random_rank(rng, n, rng.uniform_int(0, n - 1));
        EXPECT_TRUE(in_S_union_phi_dual(Matrix::Identity(n, n), Z, Modifier::identity(n), {}, i).member);
    }
}

// With no modifier, Z A C = 0 for a C of full rank onto ker Z iff Z A K = 0.
TEST(UnionMembership, IdentityModifierIsKernelInvariance)
{
    Rng rng(5);
    for (int i = 0; i < 40; ++i) {
        const int n = rng.uniform_int(1, 5);
        const Matrix Z = random_rank(rng, n, rng.uniform_int(0, n - 1));
        Matrix A = rng.ginibre(n, n);
        if (i % 2 == 0) {
            A.setZero();
            for (const Matrix& B : basis_S_ker(Z))
                A += rng.gaussian() * B;
        }
        EXPECT_EQ(in_S_union_phi(A, Z, Modifier::identity(n), {}, i).member, in_S_ker(A, Z).member) << i;
        EXPECT_EQ(in_S_union_phi(A, Z, Modifier::J(n), {}, i).member, in_S_ker(A, Z).member) << i;
    }
}

TEST(UnionMembership, InvertibleBaseUsesZeroWitness)
{
    Rng rng(6);
    const Matrix Z = random_invertible(rng, 3);
    const MembershipVerdict v = in_S_union_phi(rng.ginibre(3, 3), Z, Modifier::J(3), {}, 1);
    EXPECT_TRUE(v.member);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_LE(max_abs(*v.witness), 0.0);
}

TEST(SingleC, NotEveryAWorks)
{
    const Matrix Z = dnm(3, 1);
    const Modifier phi = Modifier::hadamard(elementary(3, 0, 2));
    const Matrix C = elementary(3, 1, 1) + elementary(3, 2, 2);
    EXPECT_TRUE(in_S_C_phi(elementary(3, 0, 1), Z, C, phi).member);
    EXPECT_FALSE(in_S_C_phi(elementary(3, 0, 2), Z, C, phi).member);
}

TEST(Faithful, Examples)
{
    const auto J = nilpotent_faithful(Modifier::J(4), {}, 1);
    EXPECT_TRUE(J.faithful);
    EXPECT_TRUE(J.exact);
    EXPECT_TRUE(nilpotent_faithful(Modifier::identity(3), {}, 1).faithful);

    const auto h = nilpotent_faithful(Modifier::hadamard(elementary(3, 0, 2)), {}, 1);
    EXPECT_FALSE(h.faithful);
    ASSERT_TRUE(h.counterexample.has_value());
    EXPECT_EQ(*h.counterexample, elementary(3, 0, 1));
}

TEST(Faithful, SearchAgreesOnGeneralMaps)
{
    const Modifier viaJ = Modifier::general(Modifier::J(3).as_linear_map());
    EXPECT_TRUE(nilpotent_falsify(viaJ, {}, 7).faithful);

    const Modifier had = Modifier::hadamard(elementary(3, 0, 2));
    const auto r = nilpotent_faithful(Modifier::general(had.as_linear_map()), {}, 7);
    EXPECT_FALSE(r.exact);
    ASSERT_FALSE(r.faithful);
    const Matrix T = *r.counterexample;
    EXPECT_GT(operator_norm(T), 0.5);
    EXPECT_LE(max_abs(T * T), 1e-10);
    EXPECT_LE(max_abs(had.apply(T)), 1e-10);
}

// A map killing a non-coordinate square-zero direction: phi(A) = A - (v, A) v / |v|^2
// with v = vec(x y^H), (x, y) = 0.
TEST(Faithful, SearchFindsRotatedKernel)
{
    Rng rng(8);
    const int n = 3;
    const Vector x = rng.unit_vector(n);
    Vector y = rng.unit_vector(n);
    y = (y - x * x.dot(y)).normalized();
    const Matrix N = x * y.adjoint();
    const Eigen::Map<const Vector> v(N.data(), n * n);
    const Matrix L = Matrix::Identity(n * n, n * n) - v * v.adjoint();
    const auto r = nilpotent_falsify(Modifier::general(L), {}, 9, 256);
    ASSERT_FALSE(r.faithful);
    const Matrix T = *r.counterexample;
    EXPECT_LE(max_abs(T * T), 1e-8);
    EXPECT_LE(max_abs(Modifier::general(L).apply(T)), 1e-8);
}

TEST(Gershgorin, ClosedForms)
{
    Matrix D = Matrix::Zero(3, 3);
    D.diagonal() << 1.0, 2.0, cplx(0, 3);
    for (double r : gershgorin(D).radii)
        EXPECT_EQ(r, 0.0);

    Matrix S(2, 2);
    S << 0, 1, 1, 0;
    const GershgorinRegion g = gershgorin(S);
    ASSERT_EQ(g.centers.size(), 2u);
    EXPECT_EQ(g.centers[0], cplx(0.0));
    EXPECT_EQ(g.radii[0], 1.0);
    EXPECT_LE(g.excess(1.0), 0.0);
    EXPECT_LE(g.excess(-1.0), 0.0);
    EXPECT_NEAR(g.excess(cplx(0, 2)), 1.0, 1e-15);
}

TEST(Gershgorin, EigenvaluesContained)
{
    Rng rng(10);
    for (int i = 0; i < 50; ++i) {
        const int n = rng.uniform_int(1, 6);
        const Matrix A = rng.ginibre(n, n);
        const GershgorinRegion g = gershgorin(A);
        const Vector lam = Eigen::ComplexEigenSolver<Matrix>(A, false).eigenvalues();
        for (Eigen::Index k = 0; k < n; ++k)
            EXPECT_LE(g.excess(lam(k)), 1e-8);
    }
}

TEST(JBound, DiagonalIsTight)
{
    Matrix D = Matrix::Zero(3, 3);
    D.diagonal() << 1.0, -2.0, cplx(0, 3);
    const JBound b = j_norm_bound(D);
    EXPECT_TRUE(b.holds);
    EXPECT_NEAR(b.bound, 6.0, 1e-12);
    EXPECT_NEAR(b.diag_abs_sum, 6.0, 1e-12);
}

TEST(JBound, RandomHolds)
{
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const int n = rng.uniform_int(1, 6);
        Matrix A = rng.ginibre(n, n);
        if (i % 3 == 0)
            A.diagonal() *= 10.0;
        const JBound b = j_norm_bound(A);
        EXPECT_TRUE(b.holds) << b.diag_abs_sum << " > " << b.bound;
    }
}

TEST(DiagBound, ConstantFamily)
{
    Rng rng(12);
    const Matrix B = rng.ginibre(3, 3);
    const DiagBoundReport r = conjugation_diag_bound_check({B, B, B});
    EXPECT_TRUE(r.holds);
    EXPECT_FALSE(r.vacuous);
    EXPECT_EQ(r.c1, 7.0);
}

TEST(DiagBound, ScaledFamilyIsVacuous)
{
    Matrix A(2, 2);
    A << 1, 1, 1, 1;
    std::vector<Matrix> fam;
    for (int k = 0; k <= 14; ++k) {
        const double t = std::pow(10.0, -k);
        Matrix S = Matrix::Identity(2, 2);
        S(1, 1) = t;
        Matrix Si = Matrix::Identity(2, 2);
        Si(1, 1) = 1.0 / t;
        fam.push_back(S * A * Si);
    }
    const DiagBoundReport r = conjugation_diag_bound_check(fam);
    EXPECT_TRUE(r.holds);
    EXPECT_TRUE(r.vacuous);
}

TEST(DiagBound, SpectrumMismatch)
{
    try {
        conjugation_diag_bound_check({Matrix::Identity(2, 2), dnm(2, 1)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotConjugationFamily);
    }
}

TEST(DiagBound, MaxRowSum)
{
    Matrix M(2, 2);
    M << 1, -2, cplx(3, 4), 0;
    EXPECT_DOUBLE_EQ(max_row_sum_norm(M), 5.0);
}
