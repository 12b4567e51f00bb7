#include "specscales/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace specscales {

int LiftedAngle::branch() const {
    return static_cast<int>(std::floor(value / M_PI + 0.5));
}

double seed_slope(const AngularSystem& system) {
    return system.params.eigen_param + system.potential_at_zero() - 1.0;
}

AngularState seed_unstable(const AngularSystem& system, double delta_seed) {
    if (!(delta_seed > 0.0 && delta_seed < 1e-2))
        throw std::invalid_argument("seed_unstable: delta_seed must lie in (0, 1e-2)");
    return {seed_slope(system) * delta_seed, delta_seed};
}

Trajectory unstable_trajectory(const AngularSystem& system, double radius_stop,
                               std::span<const double> sections,
                               const StepControl& ctl, const ManifoldOptions& opts) {
    const AngularState seed = seed_unstable(system, opts.delta_seed);
    auto run = [&](double delta) {
        const AngularState st = seed_unstable(system, delta);
        return integrate(system, st, s_of_radius(delta), Direction::forward,
                         radius_stop, sections, ctl);
    };
    Trajectory traj = integrate(system, seed, s_of_radius(opts.delta_seed),
                                Direction::forward, radius_stop, sections, ctl);
    if (opts.paranoid) {
        const Trajectory half = run(0.5 * opts.delta_seed);
        const double d = std::abs(half.end_angle() - traj.end_angle());
        if (d >= 1e-8)
            throw FlowError("unstable_trajectory: seed-halving check failed, |d theta| = " +
                            std::to_string(d));
    }
    return traj;
}

Trajectory center_trajectory_backward(const AngularSystem& system,
                                      double radius_stop,
                                      std::span<const double> sections,
                                      const StepControl& ctl,
                                      const ManifoldOptions& opts) {
    const double mu = system.params.eigen_param;
    if (mu < 0.0)
        throw std::invalid_argument("center_trajectory_backward: eigen_param must be >= 0");
    const double seed_angle = std::atan(-std::sqrt(mu));

    double delta = opts.delta_seed_center;
    for (int attempt = 0;; ++attempt) {
        if (!(radius_stop > 0.0 && radius_stop < 1.0 - delta))
            throw std::invalid_argument(
                "center_trajectory_backward: radius_stop must lie in (0, 1 - delta)");
        Trajectory traj =
            integrate(system, {seed_angle, 1.0 - delta}, s_of_radius(1.0 - delta),
                      Direction::backward, radius_stop, sections, ctl);
        // Drift onto the in-plane unstable branch +arctan(sqrt(mu)) shows up as
        // an early upward swing while the radius is still near 1.
        bool diverged = false;
        const double guard_radius = 1.0 - 16.0 * delta;
        for (const auto& smp : traj.samples) {
            if (smp.state.radius < guard_radius) break;
            if (smp.state.angle - seed_angle > 0.5 * (std::atan(std::sqrt(mu)) - seed_angle) &&
                mu > 0.0) {
                diverged = true;
                break;
            }
        }
        if (!diverged) {
            if (opts.paranoid) {
                Trajectory half = integrate(system, {seed_angle, 1.0 - 0.5 * delta},
                                            s_of_radius(1.0 - 0.5 * delta),
                                            Direction::backward, radius_stop, sections,
                                            ctl.tightened(100.0));
                Trajectory base = integrate(system, {seed_angle, 1.0 - delta},
                                            s_of_radius(1.0 - delta),
                                            Direction::backward, radius_stop, sections,
                                            ctl.tightened(100.0));
                const double d = std::abs(half.end_angle() - base.end_angle());
                if (d >= 1e-8)
                    throw FlowError(
                        "center_trajectory_backward: seed-halving check failed, |d psi| = " +
                        std::to_string(d));
            }
            return traj;
        }
        if (attempt >= 3)
            throw FlowError(
                "center_trajectory_backward: diverged toward the unstable branch "
                "after 3 reseeds");
        delta *= 0.1;
    }
}

std::vector<double> lift(std::span<const double> raw_angles) {
    if (raw_angles.empty()) return {};
    std::vector<double> out;
    out.reserve(raw_angles.size());
    out.push_back(raw_angles[0]);
    for (std::size_t i = 1; i < raw_angles.size(); ++i) {
        double d = std::fmod(raw_angles[i] - out.back(), M_PI);
        if (d >= M_PI / 2.0) d -= M_PI;
        if (d < -M_PI / 2.0) d += M_PI;
        // after reduction into [-pi/2, pi/2) a jump at the boundary is ambiguous
        if (std::abs(std::abs(d) - M_PI / 2.0) < 1e-12)
            throw std::invalid_argument("lift: ambiguous angle jump >= pi/2");
        out.push_back(out.back() + d);
    }
    return out;
}

double convert_outer_to_inner_angle(double psi_lifted, double epsilon) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("convert_outer_to_inner_angle: epsilon must be > 0");
    const double k = std::floor(psi_lifted / M_PI + 0.5);
    const double frac = psi_lifted - k * M_PI;  // in [-pi/2, pi/2)
    if (std::abs(std::abs(frac) - M_PI / 2.0) < 1e-15)
        return k * M_PI + std::copysign(M_PI / 2.0, frac);
    return k * M_PI + std::atan(epsilon * std::tan(frac));
}

double decay_slope_diagnostic(const CompositePotential& pots, double r_lo,
                              double r_hi, int n_samples, const StepControl& ctl) {
    if (!(r_lo > 0.0 && r_hi > r_lo) || n_samples < 3)
        throw std::invalid_argument("decay_slope_diagnostic: bad sampling window");
    AngularSystem model{Scale::inner,
                        {0.0, pots.epsilon, true, false},
                        pots};
    std::vector<double> sections;
    sections.reserve(n_samples);
    const double ratio = std::pow(r_hi / r_lo, 1.0 / (n_samples - 1));
    for (int i = 0; i < n_samples; ++i) {
        const double r = r_lo * std::pow(ratio, i);
        sections.push_back(r / (1.0 + r));
    }
    const double stop = (r_hi * 4.0) / (1.0 + r_hi * 4.0);
    const Trajectory traj = unstable_trajectory(model, stop, sections, ctl);
    // least-squares slope of log|fragment| vs log r
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n_samples; ++i) {
        const auto& ev = traj.event_at(sections[i]);
        const double r = sections[i] / (1.0 - sections[i]);
        const double frag = std::abs(
            ev.state.angle - std::round(ev.state.angle / M_PI) * M_PI);
        const double x = std::log(r), y = std::log(std::max(frag, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = n_samples;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace specscales
