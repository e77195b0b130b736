#include "conjlim/pathsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace conjlim {

namespace {

// U counts as invertible while sigma_min / sigma_max stays above this times n.
constexpr double kSingularRel = 1e-14;

bool invertible(const Matrix& U)
{
    Eigen::JacobiSVD<Matrix> svd(U);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) > kSingularRel * static_cast<double>(U.rows()) * s(0);
}

} // namespace

std::vector<double> log_grid(double lo, double hi, int points)
{
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
        throw Error(ErrorKind::InvalidInput, "log_grid: need 0 < lo < hi and at least 2 points");
    std::vector<double> g;
    const double a = std::log10(hi), b = std::log10(lo);
    for (int i = 0; i < points; ++i)
        g.push_back(std::pow(10.0, a + (b - a) * i / (points - 1)));
    return g;
}

const char* verdict_name(GrowthVerdict v)
{
    switch (v) {
    case GrowthVerdict::Bounded: return "bounded";
    case GrowthVerdict::Divergent: return "divergent";
    case GrowthVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

PathSpec PathSpec::linear(const Matrix& Z, const Matrix& E)
{
    require_square(Z, "linear path");
    require_same_shape(E, Z, "linear path");
    PathSpec p;
    p.kind = Kind::Linear;
    p.Z = Z;
    p.E = {E};
    return p;
}

PathSpec PathSpec::polynomial(const Matrix& Z, const std::vector<Matrix>& E)
{
    require_square(Z, "polynomial path");
    for (const Matrix& e : E)
        require_same_shape(e, Z, "polynomial path");
    PathSpec p;
    p.kind = Kind::Polynomial;
    p.Z = Z;
    p.E = E;
    return p;
}

PathSpec PathSpec::good(const GoodPath& gp)
{
    PathSpec p = polynomial(gp.Z, gp.E);
    p.kind = Kind::Good;
    return p;
}

PathSpec PathSpec::from_samples(std::vector<std::pair<double, Matrix>> samples)
{
    if (samples.empty())
        throw Error(ErrorKind::InvalidInput, "sample path: no samples");
    for (const auto& [t, U] : samples) {
        if (!(t > 0.0))
            throw Error(ErrorKind::InvalidInput, "sample path: t must be positive");
        require_square(U, "sample path");
        require_same_shape(U, samples.front().second, "sample path");
    }
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    PathSpec p;
    p.kind = Kind::Samples;
    p.samples = std::move(samples);
    return p;
}

Eigen::Index PathSpec::dim() const
{
    return kind == Kind::Samples ? samples.front().second.rows() : Z.rows();
}

std::vector<double> PathSpec::grid() const
{
    if (kind == Kind::Samples) {
        std::vector<double> g;
        for (const auto& s : samples)
            g.push_back(s.first);
        return g;
    }
    return t_grid.empty() ? log_grid() : t_grid;
}

Matrix PathSpec::at(double t) const
{
    if (kind == Kind::Samples)
        throw Error(ErrorKind::InvalidInput, "sample path: no evaluation between samples");
    return path_at(Z, E, t);
}

Matrix conjugate(const Matrix& U, const Matrix& A)
{
    const cplx a = A(0, 0);
    Matrix A0 = A;
    A0.diagonal().array() -= a;
    // (U A0) U^-1 = X  <=>  U^T X^T = (U A0)^T
    Eigen::PartialPivLU<Matrix> lu(U.transpose());
    Matrix X = lu.solve((U * A0).transpose()).transpose();
    X.diagonal().array() += a;
    return X;
}

void fit_growth(GrowthReport& rep, const GrowthThresholds& thr)
{
    const auto& ts = rep.t_values;
    if (ts.empty())
        throw Error(ErrorKind::InvalidInput, "fit_growth: empty grid");
    rep.max_norm = *std::max_element(rep.norms.begin(), rep.norms.end());
    rep.min_norm = *std::min_element(rep.norms.begin(), rep.norms.end());
    const double tmin = *std::min_element(ts.begin(), ts.end());

    std::vector<double> xs, ys;
    double wmax = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] <= 10.0 * tmin * (1.0 + 1e-9))
            wmax = std::max(wmax, rep.norms[i]);
    const double floor = 1e-14 * std::max(1.0, rep.max_norm);
    if (wmax <= floor) {
        // identically (numerically) zero near the base point
        rep.alpha = 0.0;
        rep.r2 = 1.0;
        rep.verdict = GrowthVerdict::Bounded;
        return;
    }
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] <= 10.0 * tmin * (1.0 + 1e-9)) {
            xs.push_back(std::log(ts[i]));
            ys.push_back(std::log(std::max(rep.norms[i], floor)));
        }
    const auto m = static_cast<double>(xs.size());
    if (xs.size() < 2) {
        rep.alpha = 0.0;
        rep.r2 = 0.0;
        rep.verdict = GrowthVerdict::Inconclusive;
        return;
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    rep.alpha = -slope;
    // A flat window (log-norm spread below 1e-6) is explained by the fit.
    if (syy <= 1e-12 * m) {
        rep.r2 = 1.0;
    } else {
        double ssr = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double e = ys[i] - (my + slope * (xs[i] - mx));
            ssr += e * e;
        }
        rep.r2 = 1.0 - ssr / syy;
    }
    // Total variation too small for any exponent above the bounded cutoff:
    // the residual scatter is rounding noise, not a failed fit.
    const auto [ylo, yhi] = std::minmax_element(ys.begin(), ys.end());
    const auto [xlo, xhi] = std::minmax_element(xs.begin(), xs.end());
    const bool flat = *yhi - *ylo <= thr.alpha_bounded_max * (*xhi - *xlo);
    if (flat && std::abs(rep.alpha) <= thr.alpha_bounded_max)
        rep.verdict = GrowthVerdict::Bounded;
    else if (rep.r2 < thr.r2_min)
        rep.verdict = GrowthVerdict::Inconclusive;
    else if (rep.alpha <= thr.alpha_bounded_max)
        rep.verdict = GrowthVerdict::Bounded;
    else if (rep.alpha >= thr.alpha_divergent_min)
        rep.verdict = GrowthVerdict::Divergent;
    else
        rep.verdict = GrowthVerdict::Inconclusive;
}

GrowthReport simulate(const PathSpec& path, const Matrix& A, const Modifier& phi,
                      const GrowthThresholds& thr)
{
    require_square(A, "simulate");
    if (A.rows() != path.dim() || phi.dim() != A.rows())
        throw Error(ErrorKind::InvalidInput, "simulate: dimension mismatch");
    GrowthReport rep;
    const auto eval = [&](double t, const Matrix& U) {
        if (!U.allFinite() || !invertible(U)) {
            std::ostringstream os;
            os << "simulate: path is singular at t = " << t;
            throw Error(ErrorKind::PathSingular, os.str());
        }
        rep.t_values.push_back(t);
        rep.norms.push_back(operator_norm(phi.apply(conjugate(U, A))));
    };
    if (path.kind == PathSpec::Kind::Samples) {
        for (const auto& [t, U] : path.samples)
            eval(t, U);
    } else {
        for (double t : path.grid()) {
            if (!(t > 0.0))
                throw Error(ErrorKind::InvalidInput, "simulate: grid points must be positive");
            eval(t, path.at(t));
        }
    }
    fit_growth(rep, thr);
    return rep;
}

Matrix rank_one_probe(const Vector& x, const Vector& y)
{
    if (x.size() == 0 || y.size() == 0 || x.norm() == 0.0 || y.norm() == 0.0)
        throw Error(ErrorKind::InvalidInput, "rank_one_probe: zero vector");
    if (x.size() != y.size())
        throw Error(ErrorKind::InvalidInput, "rank_one_probe: size mismatch");
    return x * y.adjoint();
}

SearchResult divergence_search(const Matrix& A, const Matrix& Z, const Modifier& phi, double r,
                               long budget, std::uint64_t seed, double target)
{
    require_square(Z, "divergence_search");
    require_square(A, "divergence_search");
    require_same_shape(A, Z, "divergence_search");
    if (!(r > 0.0))
        throw Error(ErrorKind::InvalidInput, "divergence_search: radius must be positive");
    const Eigen::Index n = Z.rows();
    Rng rng(seed);

    // The good-path direction shrinks the kernel at rate eps; rank-one
    // probes x y^H then tilt the conjugation by up to 1/eps.
    const GoodPath gp = construct_good_path(Z, {}, 0);
    Matrix Ehat = gp.E.front();
    const double en = operator_norm(Ehat);
    Ehat = en > 0.0 ? Matrix(Ehat / en) : Matrix(Matrix::Identity(n, n));

    std::vector<Vector> pool;
    const Matrix I = Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        pool.push_back(I.col(i));
    for (const Subspace& S : {kernel_basis(Z), kernel_basis(Matrix(Z.adjoint())), image_basis(Z),
                              image_basis(Matrix(Z.adjoint()))})
        for (Eigen::Index j = 0; j < S.dim(); ++j)
            pool.push_back(S.basis.col(j));
    const auto pick = [&]() -> Vector {
        if (rng.bernoulli(0.3))
            return rng.unit_vector(n);
        return pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(pool.size()) - 1))];
    };
    const auto phase = [&]() {
        const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
        return cplx(std::cos(th), std::sin(th));
    };

    struct State {
        double eps;
        Matrix W;
    };
    SearchResult res;
    res.U = Z + 0.5 * r * Ehat;
    res.norm = -1.0;
    State best{0.5 * r, Matrix::Zero(n, n)};

    const auto evaluate = [&](const State& s) -> bool {
        ++res.evaluations;
        const Matrix D = s.eps * Ehat + s.W;
        if (!D.allFinite() || operator_norm(D) >= r)
            return false;
        const Matrix U = Z + D;
        if (!invertible(U))
            return false;
        const double v = operator_norm(phi.apply(conjugate(U, A)));
        if (!std::isfinite(v) || v <= res.norm)
            return false;
        res.norm = v;
        res.U = U;
        best = s;
        return true;
    };
    const double eps_min = 1e-11 * r;

    evaluate(best);
    while (res.evaluations < budget && res.norm <= target) {
        const bool explore = res.evaluations < budget / 3 || rng.bernoulli(0.25);
        State s = best;
        if (explore) {
            s.eps = std::max(eps_min, r * std::pow(10.0, -rng.uniform(0.5, 11.0)));
            s.W = Matrix::Zero(n, n);
            const int terms = rng.uniform_int(0, 2);
            for (int k = 0; k < terms; ++k) {
                const double delta = (r - s.eps) * rng.uniform(0.05, 0.9) / terms;
                s.W += delta * phase() * rank_one_probe(pick(), pick());
            }
        } else {
            switch (rng.uniform_int(0, 3)) {
            case 0: s.eps = std::max(eps_min, s.eps * std::pow(10.0, -rng.uniform(0.2, 1.5))); break;
            case 1:
                s.W += r * std::pow(10.0, -rng.uniform(0.3, 3.0)) * phase() *
                       rank_one_probe(pick(), pick());
                break;
            case 2: s.W *= rng.uniform(1.05, 2.0); break;
            default: s.W += 1e-3 * r * rng.ginibre(n, n); break;
            }
        }
        evaluate(s);
    }
    if (res.norm < 0.0)
        res.norm = 0.0;
    return res;
}

Filtration filtration_of(const std::vector<Matrix>& E_list, const Tolerance& tol)
{
    if (E_list.empty())
        throw Error(ErrorKind::InvalidInput, "filtration_of: empty coefficient list");
    Filtration F;
    for (const Matrix& E : E_list) {
        require_square(E, "filtration_of");
        require_same_shape(E, E_list.front(), "filtration_of");
        const Subspace K = kernel_basis(E, tol);
        F.spaces.push_back(F.spaces.empty() ? K : intersect(F.spaces.back(), K, tol));
    }
    return F;
}

MembershipVerdict in_S_filtration(const Matrix& A, const Filtration& F, const Tolerance& tol)
{
    require_square(A, "in_S_filtration");
    MembershipVerdict v;
    v.member = true;
    v.threshold = tol.residual_abs * std::max(1.0, operator_norm(A));
    const Matrix I = Matrix::Identity(A.rows(), A.cols());
    for (const Subspace& S : F.spaces) {
        if (S.ambient() != A.rows())
            throw Error(ErrorKind::InvalidInput, "in_S_filtration: ambient dimension mismatch");
        if (S.dim() == 0)
            continue;
        const Matrix R = (I - S.projector()) * A * S.basis;
        const double res = operator_norm(R);
        v.residual = std::max(v.residual, res);
        if (res > v.threshold && v.member) {
            v.member = false;
            for (Eigen::Index j = 0; j < R.cols(); ++j)
                if (R.col(j).norm() > v.threshold) {
                    v.witness = Matrix(S.basis.col(j));
                    break;
                }
            if (!v.witness) {
                Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeThinV);
                v.witness = Matrix(S.basis * svd.matrixV().col(0));
            }
        }
    }
    return v;
}

Matrix adjugate(const Matrix& M)
{
    const Eigen::Index n = M.rows();
    if (n == 1)
        return Matrix::Ones(1, 1);
    Matrix adj(n, n);
    Matrix minor(n - 1, n - 1);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            // delete row i, column j
            for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
                if (r == i)
                    continue;
                for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
                    if (c == j)
                        continue;
                    minor(rr, cc++) = M(r, c);
                }
                ++rr;
            }
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            adj(j, i) = sign * minor.partialPivLu().determinant();
        }
    return adj;
}

std::vector<Matrix> interpolate_on_circle(const std::vector<Matrix>& values)
{
    const auto N = static_cast<long>(values.size());
    std::vector<Matrix> coef;
    for (long k = 0; k < N; ++k) {
        Matrix c = Matrix::Zero(values.front().rows(), values.front().cols());
        for (long j = 0; j < N; ++j) {
            const double th = -2.0 * std::numbers::pi * static_cast<double>((j * k) % N) / N;
            c += cplx(std::cos(th), std::sin(th)) * values[static_cast<std::size_t>(j)];
        }
        coef.push_back(c / static_cast<double>(N));
    }
    return coef;
}

PolynomialBoundedness polynomial_path_analysis(const Matrix& Z, const std::vector<Matrix>& E,
                                               const Matrix& A, const Tolerance& tol)
{
    require_square(Z, "polynomial_path_bounded");
    require_square(A, "polynomial_path_bounded");
    require_same_shape(A, Z, "polynomial_path_bounded");
    for (const Matrix& e : E)
        require_same_shape(e, Z, "polynomial_path_bounded");
    (void)tol;
    const Eigen::Index n = Z.rows();
    const long p = static_cast<long>(E.size());
    // deg(U A adj U) <= p + (n-1)p and deg det U <= np
    const long N = n * std::max(p, 1L) + 1;

    std::vector<Matrix> pv, dv;
    for (long j = 0; j < N; ++j) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / N;
        const Matrix U = path_at(Z, E, cplx(std::cos(th), std::sin(th)));
        pv.push_back(U * A * adjugate(U));
        dv.push_back(Matrix::Constant(1, 1, U.partialPivLu().determinant()));
    }
    PolynomialBoundedness out;
    out.numerator = interpolate_on_circle(pv);
    for (const Matrix& d : interpolate_on_circle(dv))
        out.determinant.push_back(d(0, 0));

    double dmax = 0.0, pmax = 0.0;
    for (const cplx& d : out.determinant)
        dmax = std::max(dmax, std::abs(d));
    for (const Matrix& c : out.numerator)
        pmax = std::max(pmax, c.cwiseAbs().maxCoeff());
    constexpr double rel = 1e-9;
    for (long k = 0; k < N && out.determinant_lowest < 0; ++k)
        if (std::abs(out.determinant[static_cast<std::size_t>(k)]) > rel * dmax && dmax > 0.0)
            out.determinant_lowest = static_cast<int>(k);
    if (out.determinant_lowest < 0)
        throw Error(ErrorKind::InvalidPath, "polynomial_path_bounded: det U(t) vanishes identically");
    for (long k = 0; k < N && out.numerator_lowest < 0; ++k)
        if (pmax > 0.0 && out.numerator[static_cast<std::size_t>(k)].cwiseAbs().maxCoeff() > rel * pmax)
            out.numerator_lowest = static_cast<int>(k);
    out.bounded = out.numerator_lowest < 0 || out.numerator_lowest >= out.determinant_lowest;
    return out;
}

bool polynomial_path_bounded(const Matrix& Z, const std::vector<Matrix>& E, const Matrix& A,
                             const Tolerance& tol)
{
    return polynomial_path_analysis(Z, E, A, tol).bounded;
}

LocalityResult locality_probe(const Matrix& A, const Matrix& Z, const Modifier& phi, double r,
                              std::uint64_t seed, int samples, long budget, double threshold)
{
    require_square(Z, "locality_probe");
    if (!(r > 0.0))
        throw Error(ErrorKind::InvalidInput, "locality_probe: radius must be positive");
    const Eigen::Index n = Z.rows();
    const Eigen::Index m = numerical_rank(Z);
    Rng rng(seed);
    LocalityResult out;
    for (int s = 0; s < samples; ++s) {
        Matrix Zp = Z;
        if (s > 0) {
            const Matrix G = rng.ginibre(n, n);
            Zp = Z + rng.uniform(0.05, 0.45) * r * G / operator_norm(G);
            if (s % 2 == 1 && m < n) {
                // keep the rank so the sample stays singular
                Eigen::JacobiSVD<Matrix> svd(Zp, Eigen::ComputeFullU | Eigen::ComputeFullV);
                Eigen::VectorXcd sv = svd.singularValues().cast<cplx>();
                sv.tail(n - m).setZero();
                Zp = svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
            }
        }
        const double dist = operator_norm(Zp - Z);
        if (dist >= r)
            continue;
        const SearchResult sr =
            divergence_search(A, Zp, phi, r - dist, budget, derive_seed(seed, s), threshold);
        out.worst_norm = std::max(out.worst_norm, sr.norm);
        if (sr.norm > threshold) {
            out.survived = false;
            out.violating_Z = Zp;
            return out;
        }
    }
    return out;
}

} // namespace conjlim
