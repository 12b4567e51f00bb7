#include "specscales/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace specscales {

namespace {

double potential_at(const CompositePotential& pots, OperatorKind which, double r) {
    switch (which) {
        case OperatorKind::model_inner: return pots.v0.value(r);
        case OperatorKind::model_outer: return pots.v1.value(r);  // rho coordinate
        case OperatorKind::full: return pots.w(r);
    }
    return 0.0;
}

}  // namespace

TridiagonalOperator discretize(const CompositePotential& pots, OperatorKind which,
                               RadialGrid grid) {
    if (grid.N < 16) throw std::invalid_argument("discretize: N must be >= 16");
    if (!(grid.R > 0.0)) throw std::invalid_argument("discretize: R must be > 0");
    // tail condition |W(R)| < 1e-8, R doubled (h preserved) up to 4 times
    int doublings = 0;
    while (std::abs(potential_at(pots, which, grid.R)) >= 1e-8) {
        if (doublings++ >= 4)
            throw std::runtime_error(
                "discretize: potential tail above 1e-8 after 4 domain doublings");
        grid.R *= 2.0;
        grid.N *= 2;
    }
    TridiagonalOperator A;
    A.grid = grid;
    const double h = grid.h();
    const double inv_h2 = 1.0 / (h * h);
    A.diag.resize(grid.N);
    A.offdiag.assign(grid.N - 1, inv_h2);
    for (int i = 0; i < grid.N; ++i) {
        const double r = (i + 1) * h;
        A.diag[i] = -2.0 * inv_h2 - potential_at(pots, which, r);
    }
    return A;
}

int sturm_count_above(const TridiagonalOperator& A, double shift) {
    if (!std::isfinite(shift))
        throw std::invalid_argument("sturm_count_above: shift must be finite");
    const std::size_t n = A.diag.size();
    double d = A.diag[0] - shift;
    int negative = d < 0.0 ? 1 : 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (d == 0.0) d = 1e-300;  // standard zero-pivot guard
        const double b = A.offdiag[i - 1];
        d = (A.diag[i] - shift) - b * b / d;
        if (d < 0.0) ++negative;
    }
    return static_cast<int>(n) - negative;
}

OracleCount oracle_count(const CompositePotential& pots, OperatorKind which,
                         double shift, RadialGrid base) {
    OracleCount res;
    res.base_grid = base;
    for (int level = 0; level < 3; ++level) {
        RadialGrid g{base.R, base.N << level};
        res.ladder[level] = sturm_count_above(discretize(pots, which, g), shift);
    }
    res.converged =
        res.ladder[0] == res.ladder[1] && res.ladder[1] == res.ladder[2];
    res.count = res.ladder[2];
    if (!res.converged)
        throw std::runtime_error(
            "oracle_count: grid ladder did not converge (counts " +
            std::to_string(res.ladder[0]) + ", " + std::to_string(res.ladder[1]) +
            ", " + std::to_string(res.ladder[2]) + ")");
    return res;
}

namespace {

// j-th largest eigenvalue above 0 (j = 1-based) by bisection on the inertia
// count; returns NaN if there are fewer than j positive eigenvalues.
double jth_largest(const TridiagonalOperator& A, int j) {
    if (sturm_count_above(A, 0.0) < j)
        return std::numeric_limits<double>::quiet_NaN();
    double hi = 0.0;
    for (std::size_t i = 0; i < A.diag.size(); ++i) {
        double row = A.diag[i];
        if (i > 0) row += std::abs(A.offdiag[i - 1]);
        if (i + 1 < A.diag.size()) row += std::abs(A.offdiag[i]);
        hi = std::max(hi, row);  // Gershgorin upper bound
    }
    double lo = 0.0;
    while (hi - lo > 1e-10 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count_above(A, mid) >= j)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

OracleEigenvalues oracle_eigenvalues(const CompositePotential& pots,
                                     OperatorKind which, int top_k,
                                     RadialGrid base) {
    if (top_k < 1) throw std::invalid_argument("oracle_eigenvalues: top_k must be >= 1");
    OracleEigenvalues out;
    const TridiagonalOperator mid = discretize(pots, which, {base.R, base.N * 2});
    const TridiagonalOperator fine = discretize(pots, which, {base.R, base.N * 4});
    const int available = sturm_count_above(fine, 0.0);
    out.short_count = available < top_k;
    const int k = std::min(top_k, available);
    for (int j = 1; j <= k; ++j) {
        const double lm = jth_largest(mid, j);
        const double lf = jth_largest(fine, j);
        OracleEigenvalue ev;
        ev.value = (4.0 * lf - lm) / 3.0;  // h^2 Richardson step
        ev.error_bar = std::abs(lf - lm) / 3.0 + 1e-10 * std::max(1.0, std::abs(lf));
        out.values.push_back(ev);
    }
    return out;
}

RadialGrid oracle_grid_for(OperatorKind which, double lambda_min_hint) {
    RadialGrid g = which == OperatorKind::model_inner ? RadialGrid{200.0, 4000}
                                                      : RadialGrid{400.0, 8000};
    if (lambda_min_hint > 0.0) {
        const double need = 20.0 / std::sqrt(lambda_min_hint);
        if (need > g.R) {
            const double h = g.h();
            g.R = need;
            g.N = static_cast<int>(std::ceil(g.R / h)) - 1;
        }
    }
    return g;
}

}  // namespace specscales
