#include "conjlim/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "conjlim/criteria.hpp"
#include "conjlim/goodpath.hpp"
#include "conjlim/modifier.hpp"
#include "conjlim/pathsim.hpp"

namespace conjlim {

namespace {

using Cases = std::vector<SuiteCase>;

std::string case_name(const char* prefix, long i, int width = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%0*ld", prefix, width, i);
    return buf;
}

int count_or(const SuiteConfig& cfg, int dflt)
{
    return cfg.cases > 0 ? cfg.cases : dflt;
}

// Null-space dimension of A -> Z A K with K = ker Z, via the Kronecker form
// vec(Z A K) = (K^T kron Z) vec(A). Independent of the constructive basis.
long brute_force_dim_S_ker(const Matrix& Z, const Tolerance& tol)
{
    const Eigen::Index n = Z.rows();
    const Subspace K = kernel_basis(Z, tol);
    if (K.dim() == 0)
        return n * n;
    const Matrix Kt = K.basis.transpose();
    Matrix M(Kt.rows() * n, n * n);
    for (Eigen::Index i = 0; i < Kt.rows(); ++i)
        for (Eigen::Index j = 0; j < Kt.cols(); ++j)
            M.block(i * n, j * n, n, n) = Kt(i, j) * Z;
    return static_cast<long>(n * n - numerical_rank(M, tol, tol.residual_abs));
}

// Singular Z of random size and rank, with A drawn half the time from the
// kernel-preserving algebra and half from the Ginibre ensemble.
struct SingularPair {
    Matrix Z, A;
};

SingularPair draw_singular_pair(Rng& rng, int nmin, int nmax, const Tolerance& tol)
{
    const int n = rng.uniform_int(nmin, nmax);
    const int m = rng.uniform_int(0, n - 1);
    SingularPair p;
    p.Z = random_rank(rng, n, m);
    if (rng.bernoulli(0.5))
        p.A = random_combination(rng, basis_S_ker(p.Z, tol));
    else
        p.A = rng.ginibre(n, n);
    return p;
}

Cases suite_dim_formula(std::uint64_t, const SuiteConfig& cfg)
{
    Cases out;
    const char* anchor = "kernel-preserving algebra of diag(I_m,0) has dimension n^2-mn+m^2";
    for (long n = 1; n <= 6; ++n)
        for (long m = 0; m <= n; ++m) {
            const Matrix Z = dnm(n, m);
            const auto basis = basis_S_ker(Z, cfg.tol);
            const long expect = dim_S_ker(n, m);
            bool ok = static_cast<long>(basis.size()) == expect;
            ok = ok && brute_force_dim_S_ker(Z, cfg.tol) == expect;
            ok = ok && matrix_span(basis, cfg.tol).dim() == expect;
            for (const Matrix& B : basis)
                ok = ok && in_S_ker(B, Z, cfg.tol).member;
            char name[32];
            std::snprintf(name, sizeof name, "n%ld_m%ld", n, m);
            out.push_back({name, ok, static_cast<double>(basis.size()), anchor});
        }
    return out;
}

std::vector<Matrix> random_goodpath_bases(std::uint64_t seed, int count)
{
    std::vector<Matrix> Zs;
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const int n = rng.uniform_int(1, 8);
        const int m = rng.uniform_int(0, n);
        Zs.push_back(random_rank(rng, n, m));
    }
    return Zs;
}

Cases suite_goodpath_residual(std::uint64_t seed, const SuiteConfig& cfg)
{
    Cases out;
    const char* anchor = "constructed linear good path: two-sided Laurent identity, ZC=CZ=0, im C=ker Z, ker C=im Z";
    const auto Zs = random_goodpath_bases(seed, count_or(cfg, 100));
    for (std::size_t i = 0; i < Zs.size(); ++i) {
        const Matrix& Z = Zs[i];
        const GoodPath gp = construct_good_path(Z, cfg.tol, 8);
        const ProductResiduals pr = product_residuals(gp);
        const double kill = std::max(operator_norm(Z * gp.Cneg), operator_norm(gp.Cneg * Z));
        const bool ok = pr.max() <= 1e-8 && kill <= 1e-10 && in_C_prime(gp.Cneg, Z, cfg.tol);
        out.push_back({case_name("z", static_cast<long>(i)), ok, std::max(pr.max(), kill), anchor});
    }
    return out;
}

Cases suite_dichotomy(std::uint64_t seed, const SuiteConfig& cfg)
{
    Cases out;
    const char* anchor = "along a good path: kernel-preserving A stays bounded, all others blow up like 1/t";
    const int count = count_or(cfg, 200);
    int inconclusive = 0;
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const SingularPair p = draw_singular_pair(rng, 1, 5, cfg.tol);
        const bool member = in_S_ker(p.A, p.Z, cfg.tol).member;
        const GoodPath gp = construct_good_path(p.Z, cfg.tol, 0);
        const GrowthReport rep =
            simulate(PathSpec::good(gp), p.A, Modifier::identity(p.Z.rows()));
        bool ok = true;
        if (rep.verdict == GrowthVerdict::Inconclusive)
            ++inconclusive;
        else if (member)
            ok = rep.alpha <= 0.1;
        else
            ok = rep.alpha >= 0.9;
        out.push_back({case_name("pair", i), ok, rep.alpha, anchor});
    }
    const double rate = static_cast<double>(inconclusive) / std::max(1, count);
    out.push_back({"inconclusive_rate", rate <= 0.02, rate, "inconclusive growth fits at most 2%"});
    return out;
}

Cases suite_example_3x3(std::uint64_t seed, const SuiteConfig& cfg)
{
    Cases out;
    const char* anchor = "Z=diag(1,0,0), H=E_13: union over C of {A : H*(ZAC)=0} is everything, each single C is not";
    const Matrix Z = dnm(3, 1);
    const Modifier phi = Modifier::hadamard(elementary(3, 0, 2));
    const int count = count_or(cfg, 100);
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const Matrix A = rng.ginibre(3, 3);
        const MembershipVerdict v = in_S_union_phi(A, Z, phi, cfg.tol, rng.engine()());
        bool ok = v.member && v.witness.has_value();
        if (ok) {
            const Matrix& C = *v.witness;
            ok = in_C_prime(C, Z, cfg.tol) && in_S_C_phi(A, Z, C, phi, cfg.tol).member;
        }
        out.push_back({case_name("member", i), ok, v.residual, anchor});
    }
    const Subspace K = kernel_basis(Z, cfg.tol);
    const Subspace L = kernel_basis(Matrix(Z.adjoint()), cfg.tol);
    for (int i = 0; i < 20; ++i) {
        Rng rng(derive_seed(seed ^ 0x5eedULL, static_cast<std::uint64_t>(i)));
        const Matrix C = K.basis * random_invertible(rng, 2) * L.basis.adjoint();
        bool violated = false;
        double metric = 0.0;
        for (int tries = 0; tries < 50 && !violated; ++tries) {
            const MembershipVerdict v = in_S_C_phi(rng.ginibre(3, 3), Z, C, phi, cfg.tol);
            violated = !v.member;
            metric = v.residual;
        }
        out.push_back({case_name("strict", i, 2), violated && in_C_prime(C, Z, cfg.tol), metric,
                       "a single C in C'(Z) does not cover every A"});
    }
    return out;
}

Cases suite_j_collapse(std::uint64_t seed, const SuiteConfig& cfg)
{
    Cases out;
    const char* anchor = "deleting the diagonal does not change the inf-bounded set: J-membership equals kernel invariance";
    const int count = count_or(cfg, 200);
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const SingularPair p = draw_singular_pair(rng, 1, 5, cfg.tol);
        const bool ker = in_S_ker(p.A, p.Z, cfg.tol).member;
        const MembershipVerdict vj =
            in_S_union_phi(p.A, p.Z, Modifier::J(p.Z.rows()), cfg.tol, rng.engine()());
        out.push_back({case_name("pair", i), ker == vj.member, ker ? 1.0 : 0.0, anchor});
    }
    return out;
}

Cases suite_nilpotent_faithful(std::uint64_t seed, const SuiteConfig& cfg)
{
    Cases out;
    const char* anchor = "Hadamard modifier is faithful on square-zero matrices iff all off-diagonal entries of H are nonzero";
    const int count = count_or(cfg, 50);
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const int n = rng.uniform_int(2, 5);
        const double pzero = rng.uniform(0.0, 0.25);
        Matrix H = rng.ginibre(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b && rng.bernoulli(pzero))
                    H(a, b) = 0.0;
        if (rng.bernoulli(0.3))
            H.diagonal().setZero();
        const Modifier had = Modifier::hadamard(H);
        const FaithfulnessResult exact = nilpotent_faithful(had, cfg.tol, rng.engine()());
        const Modifier gen = Modifier::general(had.as_linear_map());
        const FaithfulnessResult search = nilpotent_faithful(gen, cfg.tol, rng.engine()());
        bool ok = exact.exact && !search.exact && exact.faithful == search.faithful;
        double metric = 0.0;
        for (const FaithfulnessResult* r : {&exact, &search}) {
            if (r->faithful)
                continue;
            if (!r->counterexample) {
                ok = false;
                continue;
            }
            const Matrix& T = *r->counterexample;
            const double tn = operator_norm(T);
            const double sq = operator_norm(T * T) / (tn * tn);
            const double ph = operator_norm(had.apply(T)) / tn;
            metric = std::max({metric, sq, ph});
            ok = ok && tn > 0.0 && sq <= 1e-10 && ph <= 1e-10;
        }
        out.push_back({case_name("pattern", i), ok, metric, anchor});
    }
    return out;
}

Cases suite_gershgorin(std::uint64_t seed, const SuiteConfig& cfg)
{
    Cases out;
    const char* anchor = "Gershgorin disks contain every eigenvalue";
    const int count = count_or(cfg, 200);
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const int n = rng.uniform_int(1, 6);
        const Matrix A = rng.ginibre(n, n);
        const GershgorinRegion g = gershgorin(A);
        const Vector lam = Eigen::ComplexEigenSolver<Matrix>(A, false).eigenvalues();
        double worst = -std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < lam.size(); ++k)
            worst = std::max(worst, g.excess(lam(k)));
        out.push_back({case_name("a", i), worst <= 1e-8, worst, anchor});
    }
    return out;
}

Cases suite_appendix_a(std::uint64_t seed, const SuiteConfig& cfg)
{
    Cases out;
    const char* anchor = "diagonal mass bounded by twice the Gershgorin radii plus eigenvalue moduli";
    const int count = count_or(cfg, 200);
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const int n = rng.uniform_int(1, 6);
        const Matrix A = rng.ginibre(n, n);
        const JBound b = j_norm_bound(A);
        out.push_back({case_name("a", i), b.holds, b.bound - b.diag_abs_sum, anchor});
    }
    // Conjugation families: norms controlled by off-diagonal norms plus the spectrum.
    for (int i = 0; i < 20; ++i) {
        Rng rng(derive_seed(seed ^ 0xa11ceULL, static_cast<std::uint64_t>(i)));
        const int n = rng.uniform_int(2, 5);
        const Matrix B0 = rng.ginibre(n, n);
        std::vector<Matrix> fam{B0};
        for (int k = 0; k < 6; ++k) {
            const Matrix P = random_invertible(rng, n);
            fam.push_back(P * B0 * P.inverse());
        }
        const DiagBoundReport r = conjugation_diag_bound_check(fam);
        out.push_back({case_name("family", i, 2), r.holds,
                       r.c1 * r.sup_offdiag + r.c2 - r.sup_norm,
                       "conjugation family: sup norm <= (2n+1) sup off-diagonal norm + spectral mass"});
    }
    return out;
}

Cases suite_poly_vs_numeric(std::uint64_t seed, const SuiteConfig& cfg)
{
    Cases out;
    const char* anchor = "polynomial path: bounded iff lowest degree of U A adj(U) >= lowest degree of det U";
    const int count = count_or(cfg, 100);
    int decided = 0;
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const int n = rng.uniform_int(1, 4);
        const int m = rng.uniform_int(0, n - 1);
        const Matrix Z = random_rank(rng, n, m);
        std::vector<Matrix> E;
        switch (rng.uniform_int(0, 2)) {
        case 0: E = {rng.ginibre(n, n)}; break;
        case 1: E = {rng.ginibre(n, n), rng.ginibre(n, n)}; break;
        default: E = {Matrix::Zero(n, n), rng.ginibre(n, n)}; break;
        }
        const Matrix A = rng.bernoulli(0.5) ? random_combination(rng, basis_S_ker(Z, cfg.tol))
                                            : rng.ginibre(n, n);
        const bool exact = polynomial_path_bounded(Z, E, A, cfg.tol);
        bool ok = true;
        double metric = std::nan("");
        try {
            const GrowthReport rep = simulate(PathSpec::polynomial(Z, E), A, Modifier::identity(n));
            metric = rep.alpha;
            if (rep.verdict != GrowthVerdict::Inconclusive) {
                ++decided;
                ok = exact == (rep.verdict == GrowthVerdict::Bounded);
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::PathSingular)
                throw;
        }
        out.push_back({case_name("path", i), ok, metric, anchor});
    }
    const double frac = static_cast<double>(decided) / std::max(1, count);
    out.push_back({"decided_fraction", frac >= 0.9, frac, "numeric verdict decisive on at least 90% of paths"});
    return out;
}

Cases suite_scalar_classification(std::uint64_t seed, const SuiteConfig& cfg)
{
    Cases out;
    const char* anchor = "at a singular base point only scalar matrices have bounded conjugation orbits";
    const int count = count_or(cfg, 20);
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        const int n = rng.uniform_int(2, 4);
        const int m = rng.uniform_int(0, n - 1);
        const Matrix Z = random_rank(rng, n, m);
        Matrix A = rng.bernoulli(0.5) ? random_combination(rng, basis_S_ker(Z, cfg.tol))
                                      : rng.ginibre(n, n);
        const SearchResult sr =
            divergence_search(A, Z, Modifier::identity(n), 0.1, 10000, rng.engine()(), 1e6);
        const bool ok = sr.norm > 1e6 && sr.evaluations <= 10000 && operator_norm(sr.U - Z) < 0.1;
        out.push_back({case_name("nonscalar", i, 2), ok, sr.norm, anchor});

        const cplx lambda = rng.gaussian() * 3.0;
        const Matrix S = lambda * Matrix::Identity(n, n);
        const SearchResult ss =
            divergence_search(S, Z, Modifier::identity(n), 0.1, 2000, rng.engine()());
        const double err = std::abs(ss.norm - std::abs(lambda));
        out.push_back({case_name("scalar", i, 2), err <= 1e-12, err,
                       "scalar matrices are central: every conjugate has norm |lambda|"});
    }
    return out;
}

Cases suite_rigidity(std::uint64_t seed, const SuiteConfig& cfg)
{
    Cases out;
    const char* anchor = "good path coefficients: ker E0 meets ker E1 trivially";
    const auto Zs = random_goodpath_bases(seed, count_or(cfg, 100));
    for (std::size_t i = 0; i < Zs.size(); ++i) {
        const GoodPath gp = construct_good_path(Zs[i], cfg.tol, 2);
        int idx = 0;
        bool ok = true;
        try {
            idx = verify_rigidity(gp.Z, gp.E, cfg.tol);
            const Subspace K0 = kernel_basis(gp.Z, cfg.tol);
            const Subspace K1 = kernel_basis(gp.E[0], cfg.tol);
            ok = idx == 1 && intersect(K0, K1, cfg.tol).dim() == 0;
        } catch (const Error&) {
            ok = false;
        }
        out.push_back({case_name("z", static_cast<long>(i)), ok, static_cast<double>(idx), anchor});
    }

    // Degree-2 good path diag(1,0) + t diag(0,1) + t^2 E_12 = [[1, t^2], [0, t]].
    const Matrix Z = dnm(2, 1);
    const std::vector<Matrix> E2{elementary(2, 1, 1), elementary(2, 0, 1)};
    {
        bool ok = true;
        int idx = 0;
        try {
            idx = verify_rigidity(Z, E2, cfg.tol);
            ok = idx == 1;
        } catch (const Error&) {
            ok = false;
        }
        out.push_back({"witness_degree2", ok, static_cast<double>(idx), "degree-2 good path has rigidity index 1"});
    }
    // (1+t) Z + t^2 diag(0,1) keeps ker Z inside ker E_1; its inverse has a
    // double pole, so verification must refuse it.
    {
        const std::vector<Matrix> Epad{Z, elementary(2, 1, 1)};
        bool rejected = false;
        try {
            verify_rigidity(Z, Epad, cfg.tol);
        } catch (const Error& e) {
            rejected = e.kind() == ErrorKind::NotAGoodPath;
        }
        const int raw = rigidity_index(Z, Epad, cfg.tol);
        out.push_back({"witness_padded_rejected", rejected && raw == 2, static_cast<double>(raw),
                       "kernel-containing first coefficient forces a double pole"});
    }
    return out;
}

using SuiteFn = std::function<Cases(std::uint64_t, const SuiteConfig&)>;

const std::map<std::string, SuiteFn>& registry()
{
    static const std::map<std::string, SuiteFn> r = {
        {"dim-formula", suite_dim_formula},
        {"goodpath-residual", suite_goodpath_residual},
        {"dichotomy", suite_dichotomy},
        {"example-3x3", suite_example_3x3},
        {"j-collapse", suite_j_collapse},
        {"nilpotent-faithful", suite_nilpotent_faithful},
        {"gershgorin", suite_gershgorin},
        {"appendix-a", suite_appendix_a},
        {"poly-vs-numeric", suite_poly_vs_numeric},
        {"scalar-classification", suite_scalar_classification},
        {"rigidity", suite_rigidity},
    };
    return r;
}

} // namespace

Matrix random_combination(Rng& rng, const std::vector<Matrix>& basis)
{
    if (basis.empty())
        throw Error(ErrorKind::InvalidInput, "random_combination: empty basis");
    Matrix A = Matrix::Zero(basis.front().rows(), basis.front().cols());
    for (const Matrix& B : basis)
        A += rng.gaussian() * B;
    return A;
}

bool SuiteReport::passed() const
{
    return failures() == 0 && !cases.empty();
}

std::size_t SuiteReport::failures() const
{
    return static_cast<std::size_t>(
        std::count_if(cases.begin(), cases.end(), [](const SuiteCase& c) { return !c.pass; }));
}

const std::vector<std::string>& suite_ids()
{
    static const std::vector<std::string> ids = {
        "dim-formula", "goodpath-residual", "dichotomy",     "example-3x3",
        "j-collapse",  "nilpotent-faithful", "gershgorin",   "appendix-a",
        "poly-vs-numeric", "scalar-classification", "rigidity",
    };
    return ids;
}

SuiteReport run_suite(const std::string& suite_id, std::uint64_t seed, const SuiteConfig& config)
{
    const auto& r = registry();
    const auto it = r.find(suite_id);
    if (it == r.end())
        throw Error(ErrorKind::UnknownSuite, "unknown suite '" + suite_id + "'");
    config.tol.validate();
    SuiteReport rep;
    rep.suite_id = suite_id;
    rep.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    rep.cases = it->second(seed, config);
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::sort(rep.cases.begin(), rep.cases.end(),
              [](const SuiteCase& a, const SuiteCase& b) { return a.name < b.name; });
    return rep;
}

json suite_report_to_json(const SuiteReport& rep)
{
    json cases = json::array();
    for (const SuiteCase& c : rep.cases) {
        json jc = {{"name", c.name}, {"status", c.pass ? "pass" : "fail"}, {"anchor", c.anchor}};
        jc["metric"] = std::isfinite(c.metric) ? json(c.metric) : json(nullptr);
        cases.push_back(jc);
    }
    return {{"suite_id", rep.suite_id},
            {"status", rep.passed() ? "pass" : "fail"},
            {"cases", cases},
            {"seed", rep.seed},
            {"wall_time", rep.wall_time}};
}

} // namespace conjlim
