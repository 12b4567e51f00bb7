#ifndef SPECSCALES_ORACLE_HPP
#define SPECSCALES_ORACLE_HPP

#include <array>
#include <vector>

#include "specscales/potentials.hpp"
#include "specscales/spectrum.hpp"

namespace specscales {

/// Uniform radial grid for the u = r*p finite-difference reduction:
/// interior points r_i = i*h, h = R/(N+1), Dirichlet u(0) = u(R) = 0.
struct RadialGrid {
    double R = 200.0;
    int N = 4000;
    double h() const { return R / (N + 1); }
};

/// Symmetric tridiagonal discretization of u'' - W u (one off-diagonal
/// array, symmetric by construction).  Positive eigenvalues approximate
/// the positive point spectrum of Delta - W on radial functions.
struct TridiagonalOperator {
    std::vector<double> diag;
    std::vector<double> offdiag;  // size N-1, all 1/h^2
    RadialGrid grid;
};

/// Builds the tridiagonal operator; requires |W(R)| < 1e-8 at the
/// truncation radius, doubling R (and N, preserving h) up to 4 times.
TridiagonalOperator discretize(const CompositePotential& pots, OperatorKind which,
                               RadialGrid grid);

/// Number of eigenvalues strictly above `shift`, from the signs of the
/// LDL^T pivots of A - shift*I, with the standard +-1e-300 zero-pivot guard.
int sturm_count_above(const TridiagonalOperator& A, double shift);

struct OracleCount {
    int count = 0;
    std::array<int, 3> ladder{0, 0, 0};  // counts at N, 2N, 4N
    bool converged = false;
    RadialGrid base_grid;
};

/// Sturm count at `shift` across the (N, 2N, 4N) grid ladder; converged when
/// all three agree.  Near-zero eigenvalues need R >~ 20/sqrt(lambda); pass a
/// grid sized accordingly (see oracle_grid_for).
OracleCount oracle_count(const CompositePotential& pots, OperatorKind which,
                         double shift = 0.0, RadialGrid base = {});

struct OracleEigenvalue {
    double value = 0.0;      // Richardson-extrapolated across the ladder
    double error_bar = 0.0;  // |finest - previous| / 3 plus bisection width
};

struct OracleEigenvalues {
    std::vector<OracleEigenvalue> values;  // descending
    bool short_count = false;              // fewer than top_k positive eigenvalues
};

/// The top_k largest positive eigenvalues, each isolated by bisection on the
/// inertia count to width 1e-10, with h^2 Richardson extrapolation.
OracleEigenvalues oracle_eigenvalues(const CompositePotential& pots,
                                     OperatorKind which, int top_k,
                                     RadialGrid base = {});

/// Default oracle grid for an operator kind; lambda_min_hint (> 0) enlarges
/// R to max(default, 20/sqrt(lambda_min)) for near-zero eigenvalues, keeping
/// the grid spacing h fixed.
RadialGrid oracle_grid_for(OperatorKind which, double lambda_min_hint = 0.0);

}  // namespace specscales

#endif
