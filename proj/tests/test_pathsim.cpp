#include "conjlim/pathsim.hpp"
#include "test_util.hpp"

using namespace conjlim;
using conjlim::testing::max_abs;

namespace {

PathSpec diag_path()
{
    return PathSpec::linear(dnm(2, 1), elementary(2, 1, 1));
}

} // namespace

TEST(Grid, DefaultLogGrid)
{
    const auto g = log_grid();
    ASSERT_EQ(g.size(), 26u);
    EXPECT_DOUBLE_EQ(g.front(), 1e-1);
    EXPECT_NEAR(g.back(), 1e-6, 1e-20);
    for (std::size_t i = 1; i < g.size(); ++i)
        EXPECT_LT(g[i], g[i - 1]);
}

TEST(Simulate, UpperCornerDiverges)
{
    // U A U^-1 = [[0, 1/t], [0, 0]]
    const GrowthReport r = simulate(diag_path(), elementary(2, 0, 1), Modifier::identity(2));
    EXPECT_NEAR(r.alpha, 1.0, 1e-6);
    EXPECT_EQ(r.verdict, GrowthVerdict::Divergent);
    EXPECT_NEAR(r.max_norm, 1e6, 1e-3);
}

TEST(Simulate, LowerCornerDecays)
{
    // U A U^-1 = [[0, 0], [t, 0]]
    const GrowthReport r = simulate(diag_path(), elementary(2, 1, 0), Modifier::identity(2));
    EXPECT_NEAR(r.alpha, -1.0, 1e-6);
    EXPECT_EQ(r.verdict, GrowthVerdict::Bounded);
}

TEST(Simulate, IdentityIsConstant)
{
    const GrowthReport r = simulate(diag_path(), Matrix::Identity(2, 2), Modifier::identity(2));
    EXPECT_EQ(r.verdict, GrowthVerdict::Bounded);
    for (double v : r.norms)
        EXPECT_DOUBLE_EQ(v, 1.0);
    // J kills the identity entirely
    EXPECT_EQ(simulate(diag_path(), Matrix::Identity(2, 2), Modifier::J(2)).verdict,
              GrowthVerdict::Bounded);
}

TEST(Simulate, SingularPathNamesT)
{
    try {
        simulate(PathSpec::linear(dnm(2, 1), dnm(2, 1)), Matrix::Identity(2, 2), Modifier::identity(2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PathSingular);
        EXPECT_NE(std::string(e.what()).find("t = "), std::string::npos) << e.what();
    }
}

TEST(Simulate, SamplesPathAndCustomGrid)
{
    std::vector<std::pair<double, Matrix>> pts;
    for (double t : log_grid(1e-5, 1e-2, 10))
        pts.emplace_back(t, diag_path().at(t));
    const GrowthReport r = simulate(PathSpec::from_samples(pts), elementary(2, 0, 1), Modifier::identity(2));
    EXPECT_EQ(r.verdict, GrowthVerdict::Divergent);
    EXPECT_EQ(r.t_values.size(), 10u);

    PathSpec p = diag_path();
    p.t_grid = log_grid(1e-4, 1e-2, 9);
    EXPECT_EQ(simulate(p, elementary(2, 0, 1), Modifier::identity(2)).t_values.size(), 9u);
}

TEST(Fit, SyntheticPowerLaws)
{
    GrowthReport r;
    r.t_values = log_grid();
    for (double t : r.t_values)
        r.norms.push_back(3.0 * std::pow(t, -2.0));
    fit_growth(r);
    EXPECT_NEAR(r.alpha, 2.0, 1e-9);
    EXPECT_EQ(r.verdict, GrowthVerdict::Divergent);

    for (auto& v : r.norms)
        v = 0.0;
    fit_growth(r);
    EXPECT_EQ(r.verdict, GrowthVerdict::Bounded);

    // half power: neither bounded nor divergent
    for (std::size_t i = 0; i < r.t_values.size(); ++i)
        r.norms[i] = std::pow(r.t_values[i], -0.5);
    fit_growth(r);
    EXPECT_EQ(r.verdict, GrowthVerdict::Inconclusive);
}

TEST(Fit, FlatNoiseIsBounded)
{
    GrowthReport r;
    r.t_values = log_grid();
    Rng rng(1);
    for (std::size_t i = 0; i < r.t_values.size(); ++i)
        r.norms.push_back(4.0 * (1.0 + 1e-6 * rng.normal()));
    fit_growth(r);
    EXPECT_EQ(r.verdict, GrowthVerdict::Bounded);
    EXPECT_LT(std::abs(r.alpha), 1e-3);
}

TEST(Conjugate, ScalarsAreExact)
{
    Rng rng(2);
    const Matrix U = random_invertible(rng, 4);
    const cplx lam(1.7, -0.3);
    const Matrix S = lam * Matrix::Identity(4, 4);
    EXPECT_EQ(conjugate(U, S), S);
    const Matrix A = rng.ginibre(4, 4);
    EXPECT_MAT_NEAR(conjugate(U, A), U * A * U.inverse(), 1e-10);
}

TEST(Search, NilpotentFamilyBlowsUp)
{
    Matrix A = Matrix::Zero(2, 2);
    A.diagonal() << 1.0, 2.0;
    const SearchResult r = divergence_search(A, Matrix::Zero(2, 2), Modifier::identity(2), 0.1, 10000, 3, 1e6);
    EXPECT_GT(r.norm, 1e6);
    EXPECT_LT(operator_norm(r.U), 0.1);
    EXPECT_LE(r.evaluations, 10000);
}

TEST(Search, KernelPreservingNonScalarStillBlowsUp)
{
    const Matrix Z = dnm(3, 1);
    const SearchResult r = divergence_search(elementary(3, 1, 2), Z, Modifier::identity(3), 0.1, 10000, 4, 1e6);
    EXPECT_GT(r.norm, 1e6);
    EXPECT_LT(operator_norm(r.U - Z), 0.1);
}

TEST(Search, ScalarNormIsExact)
{
    Rng rng(5);
    for (int i = 0; i < 5; ++i) {
        const cplx lam = rng.gaussian() * 2.0;
        const Matrix Z = random_rank(rng, 3, 1);
        const SearchResult r = divergence_search(lam * Matrix::Identity(3, 3), Z, Modifier::identity(3), 0.1, 500, i);
        EXPECT_LE(std::abs(r.norm - std::abs(lam)), 1e-12);
    }
}

TEST(RankOne, ProbeMatrix)
{
    const Vector e1 = Vector::Unit(3, 0), e2 = Vector::Unit(3, 1), e3 = Vector::Unit(3, 2);
    EXPECT_EQ(rank_one_probe(e1, e2), elementary(3, 0, 1));
    EXPECT_EQ(rank_one_probe(e1, e2) * rank_one_probe(e2, e3), rank_one_probe(e1, e3));
    Matrix sum = Matrix::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
        sum += rank_one_probe(Vector::Unit(3, i), Vector::Unit(3, i));
    EXPECT_EQ(sum, Matrix::Identity(3, 3));
    EXPECT_THROW(rank_one_probe(Vector::Zero(3), e1), Error);
}

// (A x, y) = 0 for all perpendicular unit x, y iff A is scalar.
TEST(RankOne, OffDiagonalCoefficientsDetectScalars)
{
    Rng rng(6);
    const int n = 3;
    const Matrix A = rng.ginibre(n, n);
    const Matrix S = cplx(2, 1) * Matrix::Identity(n, n);
    double worstA = 0.0, worstS = 0.0;
    for (int i = 0; i < 20; ++i) {
        const Vector x = rng.unit_vector(n);
        Vector y = rng.unit_vector(n);
        y = (y - x * x.dot(y)).normalized();
        const Matrix Exy = rank_one_probe(x, y);
        EXPECT_LE(max_abs(Exy * Exy), 1e-12);
        worstA = std::max(worstA, std::abs(y.dot(A * x)));
        worstS = std::max(worstS, std::abs(y.dot(S * x)));
    }
    EXPECT_GT(worstA, 1e-3);
    EXPECT_LE(worstS, 1e-12);
}

TEST(Filtration, Examples)
{
    const Filtration f = filtration_of({dnm(2, 1), elementary(2, 1, 1)});
    ASSERT_EQ(f.spaces.size(), 2u);
    EXPECT_EQ(f.spaces[0].dim(), 1);
    EXPECT_NEAR(std::abs(f.spaces[0].basis(1, 0)), 1.0, 1e-14);
    EXPECT_EQ(f.spaces[1].dim(), 0);

    const Filtration g = filtration_of({Matrix::Zero(3, 3), Matrix::Identity(3, 3)});
    EXPECT_EQ(g.spaces[0].dim(), 3);
    EXPECT_EQ(g.spaces[1].dim(), 0);

    EXPECT_TRUE(in_S_filtration(Matrix::Identity(2, 2), f).member);
    EXPECT_FALSE(in_S_filtration(elementary(2, 0, 1), f).member);
}

TEST(Filtration, BoundedAlongPathImpliesFiltrationInvariance)
{
    Rng rng(7);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        const int n = rng.uniform_int(2, 4);
        const Matrix Z = random_rank(rng, n, rng.uniform_int(0, n - 1));
        const Matrix K = kernel_basis(Z).basis;
        // E_1 keeps part of ker Z so the filtration has a second step
        Matrix E1 = rng.ginibre(n, n);
        if (K.cols() > 1)
            E1 = (E1 * (Matrix::Identity(n, n) - K.col(0) * K.col(0).adjoint())).eval();
        const std::vector<Matrix> E{E1, rng.ginibre(n, n)};
        Matrix A = rng.ginibre(n, n);
        if (i % 2 == 0) {
            A.setZero();
            for (const Matrix& B : basis_S_ker(Z))
                A += rng.gaussian() * B;
        }
        GrowthReport r;
        try {
            r = simulate(PathSpec::polynomial(Z, E), A, Modifier::identity(n));
        } catch (const Error&) {
            continue;
        }
        if (r.verdict != GrowthVerdict::Bounded)
            continue;
        ++checked;
        std::vector<Matrix> all{Z};
        all.insert(all.end(), E.begin(), E.end());
        EXPECT_TRUE(in_S_filtration(A, filtration_of(all)).member) << i;
    }
    EXPECT_GT(checked, 5);
}

TEST(Polynomial, HandExpansions)
{
    const Matrix Z = dnm(2, 1);
    const std::vector<Matrix> E{elementary(2, 1, 1)};
    const PolynomialBoundedness up = polynomial_path_analysis(Z, E, elementary(2, 0, 1));
    EXPECT_FALSE(up.bounded);
    EXPECT_EQ(up.numerator_lowest, 0);
    EXPECT_EQ(up.determinant_lowest, 1);
    const PolynomialBoundedness low = polynomial_path_analysis(Z, E, elementary(2, 1, 0));
    EXPECT_TRUE(low.bounded);
    EXPECT_EQ(low.numerator_lowest, 2);
    EXPECT_TRUE(polynomial_path_bounded(Z, E, Matrix::Identity(2, 2)));
}

TEST(Polynomial, IdenticallySingular)
{
    try {
        polynomial_path_bounded(dnm(2, 1), {dnm(2, 1)}, Matrix::Identity(2, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidPath);
    }
}

TEST(Polynomial, AdjugateAndInterpolation)
{
    Rng rng(8);
    for (int n = 1; n <= 5; ++n) {
        const Matrix M = rng.ginibre(n, n);
        const cplx d = M.determinant();
        EXPECT_MAT_NEAR(M * adjugate(M), Matrix(d * Matrix::Identity(n, n)), 1e-10 * std::max(1.0, std::abs(d)));
    }
    EXPECT_MAT_NEAR(adjugate(dnm(3, 2)), elementary(3, 2, 2), 1e-15);

    // f(t) = C0 + C1 t + C2 t^2 sampled at 4 roots of unity
    const std::vector<Matrix> C{rng.ginibre(2, 2), rng.ginibre(2, 2), rng.ginibre(2, 2)};
    std::vector<Matrix> vals;
    const double pi = std::acos(-1.0);
    for (int k = 0; k < 4; ++k) {
        const cplx w = std::polar(1.0, 2.0 * pi * k / 4.0);
        vals.push_back(C[0] + w * C[1] + w * w * C[2]);
    }
    const auto got = interpolate_on_circle(vals);
    ASSERT_EQ(got.size(), 4u);
    for (int k = 0; k < 3; ++k)
        EXPECT_MAT_NEAR(got[k], C[k], 1e-13);
    EXPECT_LE(max_abs(got[3]), 1e-13);
}

TEST(Polynomial, AgreesWithSimulation)
{
    Rng rng(9);
    int decided = 0;
    for (int i = 0; i < 40; ++i) {
        const int n = rng.uniform_int(1, 4);
        const Matrix Z = random_rank(rng, n, rng.uniform_int(0, n - 1));
        const std::vector<Matrix> E{rng.ginibre(n, n), rng.ginibre(n, n)};
        Matrix A = rng.ginibre(n, n);
        if (i % 2 == 0) {
            A.setZero();
            for (const Matrix& B : basis_S_ker(Z))
                A += rng.gaussian() * B;
        }
        const GrowthReport r = simulate(PathSpec::polynomial(Z, E), A, Modifier::identity(n));
        if (r.verdict == GrowthVerdict::Inconclusive)
            continue;
        ++decided;
        EXPECT_EQ(polynomial_path_bounded(Z, E, A), r.verdict == GrowthVerdict::Bounded) << i;
    }
    EXPECT_GE(decided, 36);
}

TEST(Locality, ScalarNeverFalsified)
{
    const LocalityResult r = locality_probe(cplx(0.5, 0.5) * Matrix::Identity(3, 3), dnm(3, 1),
                                            Modifier::identity(3), 0.1, 1, 4, 500);
    EXPECT_TRUE(r.survived);
    EXPECT_NEAR(r.worst_norm, std::abs(cplx(0.5, 0.5)), 1e-12);
}

TEST(Locality, NonScalarAtSingularFalsified)
{
    Rng rng(10);
    const LocalityResult r = locality_probe(rng.ginibre(3, 3), dnm(3, 1), Modifier::identity(3), 0.1, 2);
    EXPECT_FALSE(r.survived);
    ASSERT_TRUE(r.violating_Z.has_value());
    EXPECT_LT(operator_norm(*r.violating_Z - dnm(3, 1)), 0.1);
}

TEST(Locality, InvertibleBaseSurvivesSmallRadius)
{
    Rng rng(11);
    const Matrix Z = random_invertible(rng, 3);
    const Matrix A = rng.ginibre(3, 3);
    const double r = 0.05 * smallest_singular_value(Z);
    const LocalityResult res = locality_probe(A, Z, Modifier::identity(3), r, 3, 4, 500);
    EXPECT_TRUE(res.survived);
    // continuity bound: ||U A U^-1|| <= ||A|| (s + r) / (s - r) relative to the base conjugate
    EXPECT_LT(res.worst_norm, 10.0 * operator_norm(A) * operator_norm(Z) / smallest_singular_value(Z));
}
