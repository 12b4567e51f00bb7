#include "specscales/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "specscales/parallel.hpp"

namespace specscales {

Thresholds make_thresholds(double epsilon, double alpha, std::optional<double> gamma) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("thresholds: epsilon must lie in (0, 1)");
    if (!(alpha > -0.5 && alpha < 0.0))
        throw std::invalid_argument("thresholds: alpha must lie in (-1/2, 0)");
    Thresholds th;
    th.epsilon = epsilon;
    th.alpha = alpha;
    th.r_eps = std::pow(epsilon, alpha);
    // rho = eps * r, so the matching section sits at rho_eps = eps^(alpha+1);
    // kappa = alpha + 1 ties s_eps and t_eps to the same physical radius.
    th.rho_eps = std::pow(epsilon, alpha + 1.0);
    th.s_eps = th.r_eps + alpha * std::log(epsilon);
    th.t_eps = th.rho_eps + (alpha + 1.0) * std::log(epsilon);
    th.sigma_eps = th.r_eps / (1.0 + th.r_eps);
    th.tau_eps = th.rho_eps / (1.0 + th.rho_eps);
    if (gamma) {
        th.footnote_ok = (4.0 + *gamma) * (-alpha) > 2.0 + *gamma / 4.0;
    }
    return th;
}

CountResult winding_count(double theta_start, double theta_end,
                          double eigen_param_floor, std::string system_tag) {
    if (!std::isfinite(theta_start) || !std::isfinite(theta_end))
        throw std::invalid_argument("winding_count: endpoints must be lifted finite angles");
    CountResult res;
    res.theta_start = theta_start;
    res.theta_end = theta_end;
    res.eigen_param_floor = eigen_param_floor;
    res.system = std::move(system_tag);
    const double span = (theta_start - theta_end) / M_PI;
    // The settled endpoint sits at arctan(sqrt(floor)) - m*pi, so the span is
    // m minus a fragment in (0, 1/2); the nearest integer is the count.
    // Ambiguity lives at half-integer spans (endpoint at the decaying angle,
    // i.e. the floor grazing an eigenvalue).
    res.m = static_cast<int>(std::llround(span));
    const double frac = span - std::floor(span);
    res.near_degenerate = std::abs(frac - 0.5) < 1e-3;
    return res;
}

namespace {

AngularSystem system_for(const CompositePotential& pots, OperatorKind kind,
                         double eigen_param) {
    switch (kind) {
        case OperatorKind::model_inner:
            return {Scale::inner, {eigen_param, pots.epsilon, true, false}, pots};
        case OperatorKind::model_outer:
            return {Scale::outer, {eigen_param, pots.epsilon, false, true}, pots};
        case OperatorKind::full:
            return {Scale::inner, {eigen_param, pots.epsilon, true, true}, pots};
    }
    throw std::logic_error("unknown operator kind");
}

const char* kind_tag(OperatorKind kind) {
    switch (kind) {
        case OperatorKind::model_inner: return "model_inner";
        case OperatorKind::model_outer: return "model_outer";
        case OperatorKind::full: return "full";
    }
    return "?";
}

CountResult count_once(const CompositePotential& pots, OperatorKind kind,
                       double floor, double section, const ManifoldOptions& mopts,
                       const StepControl& ctl) {
    const AngularSystem sys = system_for(pots, kind, floor);
    const AngularState seed = seed_unstable(sys, mopts.delta_seed);
    StepControl local = ctl;
    for (int attempt = 0;; ++attempt) {
        const Trajectory traj =
            integrate(sys, seed, s_of_radius(mopts.delta_seed), Direction::forward,
                      section, {}, local, 100.0, false);
        CountResult res =
            winding_count(seed.angle, traj.end_angle(), floor, kind_tag(kind));
        if (!res.near_degenerate || attempt >= 2) return res;
        local = local.tightened(10.0);  // re-run near-degenerate spans tighter
    }
}

}  // namespace

CountResult count_positive_eigenvalues(const CompositePotential& pots,
                                       OperatorKind kind, const CountOptions& opts,
                                       const StepControl& ctl) {
    pots.validate();
    if (!(opts.eigen_floor > 0.0))
        throw std::invalid_argument("count_positive_eigenvalues: eigen_floor must be > 0");
    CountResult res = count_once(pots, kind, opts.eigen_floor, opts.section_radius,
                                 opts.manifold, ctl);
    if (opts.check_floor_stability) {
        for (double f : {0.5 * opts.eigen_floor, 0.25 * opts.eigen_floor}) {
            const CountResult again =
                count_once(pots, kind, f, opts.section_radius, opts.manifold, ctl);
            if (again.m != res.m) {
                res.floor_stable = false;
                throw NearThresholdAmbiguity(
                    std::string("count unstable under eigen_floor halving (") +
                    kind_tag(kind) + "): possible near-zero eigenvalue or resonance");
            }
        }
    }
    return res;
}

double mismatch_sigma(double mu, int k, const CompositePotential& pots,
                      const Thresholds& th, const StepControl& ctl,
                      const ManifoldOptions& opts) {
    if (mu < 0.0)
        throw std::invalid_argument("mismatch_sigma: mu must be >= 0");
    const double lambda = th.epsilon * th.epsilon * mu;
    const AngularSystem inner = system_for(pots, OperatorKind::full, lambda);
    AngularSystem outer{Scale::outer, {mu, th.epsilon, true, true}, pots};

    const Trajectory in = unstable_trajectory(inner, th.sigma_eps, {}, ctl, opts);
    const Trajectory out =
        center_trajectory_backward(outer, th.tau_eps, {}, ctl, opts);
    const double theta_minus = in.end_angle() + k * M_PI;
    const double theta_plus =
        convert_outer_to_inner_angle(out.end_angle(), th.epsilon);
    return theta_minus - theta_plus;
}

MismatchCurve scan_mismatch(const CompositePotential& pots, const Thresholds& th,
                            std::span<const double> mu_grid, const StepControl& ctl,
                            Exec exec, const ManifoldOptions& opts) {
    MismatchCurve curve;
    curve.mu.assign(mu_grid.begin(), mu_grid.end());
    curve.sigma0.assign(mu_grid.size(), 0.0);
    curve.errors.assign(mu_grid.size(), std::string());
    for_each_index(mu_grid.size(), exec == Exec::parallel, [&](std::size_t i) {
        try {
            curve.sigma0[i] = mismatch_sigma(curve.mu[i], 0, pots, th, ctl, opts);
        } catch (const std::exception& e) {
            curve.sigma0[i] = std::numeric_limits<double>::quiet_NaN();
            curve.errors[i] = e.what();
        }
    });
    return curve;
}

GapSearchResult find_gap_eigenvalues(const CompositePotential& pots,
                                     const Thresholds& th,
                                     const GapSearchOptions& opts,
                                     const StepControl& ctl) {
    pots.validate();
    GapSearchResult result;
    result.mu_max =
        opts.mu_max > 0.0 ? opts.mu_max : 1.25 * pots.v1.sup_negative_part();
    if (result.mu_max <= 0.0) return result;

    // uniform grid plus a geometric lower tail so roots below the first
    // uniform node are still bracketed
    std::set<double> grid_set;
    const int n = std::max(opts.grid_n, 8);
    for (int i = 1; i <= n; ++i) grid_set.insert(result.mu_max * i / n);
    for (int j = 1; j <= 10; ++j)
        grid_set.insert(result.mu_max / n / std::pow(2.0, j));
    std::vector<double> grid(grid_set.begin(), grid_set.end());

    const MismatchCurve curve = scan_mismatch(pots, th, grid, ctl, opts.exec,
                                              opts.manifold);
    for (const auto& err : curve.errors)
        if (!err.empty())
            throw FlowError("find_gap_eigenvalues: grid scan failed: " + err);

    const auto [mn, mx] = std::minmax_element(curve.sigma0.begin(), curve.sigma0.end());
    const int k_lo = static_cast<int>(std::floor(-*mx / M_PI)) - 1;
    const int k_hi = static_cast<int>(std::ceil(-*mn / M_PI)) + 1;

    for (int k = k_lo; k <= k_hi; ++k) {
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            double flo = curve.sigma0[i] + k * M_PI;
            const double fhi = curve.sigma0[i + 1] + k * M_PI;
            if (flo == 0.0) flo = -fhi;  // exact grid hit counts as a crossing
            if (flo * fhi >= 0.0) continue;
            double lo = grid[i], hi = grid[i + 1];
            while (hi - lo > opts.bisect_tol) {
                const double mid = 0.5 * (lo + hi);
                const double fm = mismatch_sigma(mid, k, pots, th, ctl, opts.manifold);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            GapEigenvalue root;
            root.mu_hat = 0.5 * (lo + hi);
            root.lambda_hat = th.epsilon * th.epsilon * root.mu_hat;
            root.k = k;
            root.mu_lo = lo;
            root.mu_hi = hi;
            root.residual = std::abs(mismatch_sigma(root.mu_hat, k, pots, th, ctl,
                                                    opts.manifold));
            root.slope_sign = (fhi > flo) ? 1.0 : -1.0;
            result.roots.push_back(root);
        }
    }
    std::sort(result.roots.begin(), result.roots.end(),
              [](const GapEigenvalue& a, const GapEigenvalue& b) {
                  return a.mu_hat < b.mu_hat;
              });
    return result;
}

std::vector<O1Root> find_order_one_eigenvalues(const CompositePotential& pots,
                                               const O1SearchOptions& opts,
                                               const StepControl& ctl) {
    pots.validate();
    const double lam_hi = opts.lambda_max > 0.0
                              ? opts.lambda_max
                              : 1.25 * (pots.v0.sup_negative_part() +
                                        pots.epsilon * pots.epsilon *
                                            pots.v1.sup_negative_part());
    const double lam_lo = opts.lambda_min > 0.0 ? opts.lambda_min : 1e-6;
    if (!(lam_hi > lam_lo)) return {};

    const AngularSystem sys_at = system_for(pots, OperatorKind::full, 0.0);
    const auto ladder_pos = [&](double lambda) {
        AngularSystem sys = sys_at;
        sys.params.eigen_param = lambda;
        const Trajectory traj = unstable_trajectory(sys, opts.section_radius, {},
                                                    ctl, opts.manifold);
        // distance, in units of pi, from the endpoint to the decaying angle
        return (traj.end_angle() - std::atan(-std::sqrt(lambda))) / M_PI;
    };

    const int n = std::max(opts.grid_n, 8);
    std::vector<double> grid(n), val(n);
    for (int i = 0; i < n; ++i)
        grid[i] = lam_lo + (lam_hi - lam_lo) * (i + 1.0) / n;
    for_each_index(grid.size(), opts.exec == Exec::parallel,
                   [&](std::size_t i) { val[i] = ladder_pos(grid[i]); });

    std::vector<O1Root> roots;
    for (int i = 0; i + 1 < n; ++i) {
        const double dlo = val[i], dhi = val[i + 1];
        // eigenvalues are the integer crossings of the ladder position
        for (int q = static_cast<int>(std::ceil(std::min(dlo, dhi)));
             q <= static_cast<int>(std::floor(std::max(dlo, dhi))); ++q) {
            double flo = dlo - q;
            const double fhi = dhi - q;
            if (flo == 0.0) flo = -fhi;
            if (flo * fhi >= 0.0) continue;
            double lo = grid[i], hi = grid[i + 1];
            while (hi - lo > opts.bisect_tol) {
                const double mid = 0.5 * (lo + hi);
                const double fm = ladder_pos(mid) - q;
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            O1Root root;
            root.lambda = 0.5 * (lo + hi);
            root.lo = lo;
            root.hi = hi;
            root.near_range_edge = root.lambda - lam_lo < 1e-6 ||
                                   lam_hi - root.lambda < 1e-6;
            roots.push_back(root);
        }
    }
    std::sort(roots.begin(), roots.end(),
              [](const O1Root& a, const O1Root& b) { return a.lambda < b.lambda; });
    return roots;
}

SumRuleReport verify_sum_rule(const CompositePotential& pots,
                              const CountOptions& opts, const StepControl& ctl) {
    SumRuleReport rep;
    rep.epsilon = pots.epsilon;
    rep.v0_detail = count_positive_eigenvalues(pots, OperatorKind::model_inner, opts, ctl);
    rep.v1_detail = count_positive_eigenvalues(pots, OperatorKind::model_outer, opts, ctl);
    rep.w_detail = count_positive_eigenvalues(pots, OperatorKind::full, opts, ctl);
    rep.m_v0 = rep.v0_detail.m;
    rep.m_v1 = rep.v1_detail.m;
    rep.m_w = rep.w_detail.m;
    rep.equal = rep.m_w == rep.m_v0 + rep.m_v1;
    return rep;
}

double default_lambda_split(const CompositePotential& pots) {
    return pots.epsilon * pots.epsilon * 1.25 * pots.v1.sup_negative_part();
}

}  // namespace specscales
