#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "conjlim/goodpath.hpp"
#include "conjlim/modifier.hpp"

namespace conjlim {

/// Decreasing logarithmic grid from hi down to lo.
std::vector<double> log_grid(double lo = 1e-6, double hi = 1e-1, int points = 26);

/// A family of invertible matrices U(t) approaching a base point as t -> 0.
struct PathSpec {
    enum class Kind { Linear, Polynomial, Good, Samples };

    Kind kind = Kind::Linear;
    Matrix Z;
    std::vector<Matrix> E; // E_1 .. E_p
    std::vector<std::pair<double, Matrix>> samples;
    std::vector<double> t_grid; // empty: default grid (or sample times)

    static PathSpec linear(const Matrix& Z, const Matrix& E);
    static PathSpec polynomial(const Matrix& Z, const std::vector<Matrix>& E);
    static PathSpec good(const GoodPath& gp);
    static PathSpec from_samples(std::vector<std::pair<double, Matrix>> samples);

    Eigen::Index dim() const;
    std::vector<double> grid() const;
    Matrix at(double t) const; // not for Samples
};

struct GrowthThresholds {
    double alpha_bounded_max = 0.1;
    double alpha_divergent_min = 0.9;
    double r2_min = 0.9;
};

enum class GrowthVerdict { Bounded, Divergent, Inconclusive };
const char* verdict_name(GrowthVerdict v);

struct GrowthReport {
    std::vector<double> t_values;
    std::vector<double> norms;
    double alpha = 0.0; // norms ~ t^(-alpha)
    double r2 = 1.0;
    GrowthVerdict verdict = GrowthVerdict::Inconclusive;
    double max_norm = 0.0; // sampled surrogates for the limsup / liminf
    double min_norm = 0.0;
};

/// U A U^-1, written as a I + U (A - a I) U^-1 with a = A(0,0) so that
/// scalar matrices come back exactly.
Matrix conjugate(const Matrix& U, const Matrix& A);

/// Norms of phi(U(t) A U(t)^-1) over the grid and a log-log fit over the
/// smallest decade. Throws PathSingular naming the offending t.
GrowthReport simulate(const PathSpec& path, const Matrix& A, const Modifier& phi,
                      const GrowthThresholds& thr = {});

/// Fit only, exposed for tests.
void fit_growth(GrowthReport& rep, const GrowthThresholds& thr = {});

struct SearchResult {
    Matrix U;
    double norm = 0.0;
    long evaluations = 0;
};

/// Random multistart plus coordinate ascent over invertible U with
/// ||U - Z|| < r, maximizing ||phi(U A U^-1)||. Stops early once the best
/// norm exceeds target.
SearchResult divergence_search(const Matrix& A, const Matrix& Z, const Modifier& phi, double r,
                               long budget, std::uint64_t seed,
                               double target = std::numeric_limits<double>::infinity());

/// Matrix of u -> (y, u) x = x y^H.
Matrix rank_one_probe(const Vector& x, const Vector& y);

struct Filtration {
    std::vector<Subspace> spaces; // F^0 contains F^1 contains ...
};

/// F^i = ker E_0 cap ... cap ker E_i.
Filtration filtration_of(const std::vector<Matrix>& E_list, const Tolerance& tol = {});

/// A maps every F^i into itself.
MembershipVerdict in_S_filtration(const Matrix& A, const Filtration& F, const Tolerance& tol = {});

struct PolynomialBoundedness {
    bool bounded = false;
    int numerator_lowest = -1;   // lowest degree of U A adj(U), -1 when zero
    int determinant_lowest = -1; // lowest degree of det U
    std::vector<Matrix> numerator;
    std::vector<cplx> determinant;
};

/// Exact boundedness of U(t) A U(t)^-1 for a polynomial path U, comparing the
/// lowest degrees of U A adj(U) and det U. Throws InvalidPath when det U
/// vanishes identically.
PolynomialBoundedness polynomial_path_analysis(const Matrix& Z, const std::vector<Matrix>& E,
                                               const Matrix& A, const Tolerance& tol = {});
bool polynomial_path_bounded(const Matrix& Z, const std::vector<Matrix>& E, const Matrix& A,
                             const Tolerance& tol = {});

/// Coefficients of the matrix polynomial t -> f(t) of degree < points,
/// recovered from values on the complex unit circle.
std::vector<Matrix> interpolate_on_circle(const std::vector<Matrix>& values);

Matrix adjugate(const Matrix& M);

struct LocalityResult {
    bool survived = true; // false: a nearby base point showed divergence
    std::optional<Matrix> violating_Z;
    double worst_norm = 0.0;
};

/// Falsifier for sup-boundedness claims: samples base points Z' within r of Z
/// (Z itself first, then rank-preserving and generic perturbations) and runs
/// divergence_search around each.
LocalityResult locality_probe(const Matrix& A, const Matrix& Z, const Modifier& phi, double r,
                              std::uint64_t seed, int samples = 6, long budget = 2000,
                              double threshold = 1e6);

} // namespace conjlim
