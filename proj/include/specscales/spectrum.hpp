#ifndef SPECSCALES_SPECTRUM_HPP
#define SPECSCALES_SPECTRUM_HPP

#include <optional>
#include <string>
#include <vector>

#include "specscales/manifolds.hpp"
#include "specscales/odeflow.hpp"

namespace specscales {

enum class Exec { serial, parallel };

/// Matching sections between the two scales: r_eps = eps^alpha and
/// rho_eps = eps * r_eps = eps^(alpha+1), with the compactified images
/// sigma_eps, tau_eps and desingularized values s_eps, t_eps.
struct Thresholds {
    double epsilon = 0.1;
    double alpha = -0.45;
    double r_eps = 0.0, rho_eps = 0.0;
    double s_eps = 0.0, t_eps = 0.0;
    double sigma_eps = 0.0, tau_eps = 0.0;
    bool footnote_ok = true;  // (4+gamma)(-alpha) > 2 + gamma/4, when gamma given
};

/// Builds the threshold set; alpha must lie in (-1/2, 0).  If gamma is
/// supplied, footnote_ok records whether (4+gamma)(-alpha) > 2 + gamma/4.
Thresholds make_thresholds(double epsilon, double alpha,
                           std::optional<double> gamma = std::nullopt);

enum class OperatorKind { model_inner, model_outer, full };

struct CountResult {
    int m = 0;
    double theta_start = 0.0;
    double theta_end = 0.0;
    double eigen_param_floor = 0.0;
    std::string system;
    bool near_degenerate = false;  // winding fragment within 1e-3 of a half-integer
    bool floor_stable = true;      // count invariant under eigen_floor halving
};

class NearThresholdAmbiguity : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Winding count from lifted endpoint angles: the number of completed
/// downward pi-turns, round((theta_start - theta_end)/pi).  The converged
/// endpoint carries a -arctan(sqrt(eigen_param)) fragment, so the nearest
/// integer is the eigenvalue count above the floor; spans within 1e-3 of a
/// half-integer are flagged near-degenerate.
CountResult winding_count(double theta_start, double theta_end,
                          double eigen_param_floor, std::string system_tag);

struct CountOptions {
    double eigen_floor = 1e-6;
    double section_radius = 1.0 - 1e-6;
    bool check_floor_stability = true;
    ManifoldOptions manifold;
};

/// m(V): eigenvalues of the chosen operator above 0, by integrating the
/// unstable trajectory at the floor and counting pi-turns.  Near-degenerate
/// spans are re-run at tightened tolerances; a count that changes under
/// floor halving throws NearThresholdAmbiguity.
CountResult count_positive_eigenvalues(const CompositePotential& pots,
                                       OperatorKind kind,
                                       const CountOptions& opts = {},
                                       const StepControl& ctl = {});

/// Sigma^k(mu, eps): inner unstable lift at lambda = eps^2 mu sampled at
/// sigma_eps, shifted by k*pi, minus the outer center-manifold backward lift
/// at tau_eps converted through tan(theta) = eps tan(psi).
double mismatch_sigma(double mu, int k, const CompositePotential& pots,
                      const Thresholds& th, const StepControl& ctl = {},
                      const ManifoldOptions& opts = {});

struct GapEigenvalue {
    double mu_hat = 0.0;
    double lambda_hat = 0.0;  // = eps^2 * mu_hat
    int k = 0;
    double mu_lo = 0.0, mu_hi = 0.0;  // final bisection bracket
    double residual = 0.0;            // |Sigma^k| at mu_hat
    double slope_sign = 0.0;          // sign of dSigma/dmu across the bracket
};

struct GapSearchOptions {
    double mu_max = 0.0;  // <= 0: auto, 1.25 * sup|V1_-|
    int grid_n = 512;
    double bisect_tol = 1e-10;
    Exec exec = Exec::parallel;
    ManifoldOptions manifold;
};

struct GapSearchResult {
    std::vector<GapEigenvalue> roots;
    double mu_max = 0.0;
    int expected_m_v1 = -1;       // filled by callers that know m(V1)
    bool regime_violation = false;  // root count != m(V1)
};

/// Grid scan of Sigma^k over mu in (0, mu_max] for every k with a sign
/// change, bisected to |mu_hi - mu_lo| < 1e-10.  The grid is uniform with a
/// geometric lower tail so that roots below the first uniform node are
/// caught.  Root count != m(V1) is a theorem-regime finding, not an error.
GapSearchResult find_gap_eigenvalues(const CompositePotential& pots,
                                     const Thresholds& th,
                                     const GapSearchOptions& opts = {},
                                     const StepControl& ctl = {});

/// Sigma^0 on an explicit mu grid (the CSV export path); entries that fail
/// to integrate are returned as NaN with the error recorded.
struct MismatchCurve {
    std::vector<double> mu;
    std::vector<double> sigma0;
    std::vector<std::string> errors;  // empty string = ok
};
MismatchCurve scan_mismatch(const CompositePotential& pots, const Thresholds& th,
                            std::span<const double> mu_grid,
                            const StepControl& ctl = {}, Exec exec = Exec::parallel,
                            const ManifoldOptions& opts = {});

struct O1Root {
    double lambda = 0.0;
    double lo = 0.0, hi = 0.0;
    bool near_range_edge = false;
};

struct O1SearchOptions {
    double lambda_min = 0.0;  // <= 0: auto (see lambda_split)
    double lambda_max = 0.0;  // <= 0: auto, 1.25 * sup|W_-|
    int grid_n = 96;
    // Shooting section: the branch-crossing location is insensitive to the
    // section once the decay tail is resolved; 1 - 1e-4 keeps the stiff
    // O(1)-rate leg short.
    double section_radius = 1.0 - 1e-4;
    double bisect_tol = 1e-10;
    Exec exec = Exec::parallel;
    ManifoldOptions manifold;
};

/// Prufer shooting on the full inner system over a lambda window: roots of
/// theta_end(lambda) - arctan(-sqrt(lambda)) crossing integer multiples of
/// pi, bisected to 1e-10.  Roots within 1e-6 of the window edges are flagged.
std::vector<O1Root> find_order_one_eigenvalues(const CompositePotential& pots,
                                               const O1SearchOptions& opts = {},
                                               const StepControl& ctl = {});

struct SumRuleReport {
    int m_v0 = 0, m_v1 = 0, m_w = 0;
    double epsilon = 0.0;
    bool equal = false;
    CountResult v0_detail, v1_detail, w_detail;
};

SumRuleReport verify_sum_rule(const CompositePotential& pots,
                              const CountOptions& opts = {},
                              const StepControl& ctl = {});

/// Default split between the gap band and the O(1) band: eps^2 * mu_max.
/// Reporting convenience only; the full count m(W) never depends on it.
double default_lambda_split(const CompositePotential& pots);

}  // namespace specscales

#endif
