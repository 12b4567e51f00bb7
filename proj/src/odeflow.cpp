#include "specscales/odeflow.hpp"

#include <algorithm>
#include <cmath>

namespace specscales {

double extended_V0(const PotentialSpec& v0, double sigma) {
    if (sigma >= 1.0) return 0.0;
    return v0.value(sigma / (1.0 - sigma));
}

double extended_V1eps(const PotentialSpec& v1, double epsilon, double sigma) {
    if (sigma >= 1.0) return 0.0;
    return scaled_eval(v1, epsilon, sigma / (1.0 - sigma));
}

double AngularSystem::potential_term(double radius) const {
    if (radius >= 1.0) return 0.0;
    const double x = radius / (1.0 - radius);  // r on the inner scale, rho on the outer
    double pot = 0.0;
    if (scale == Scale::inner) {
        if (params.include_inner_potential) pot += pots.v0.value(x);
        if (params.include_outer_potential)
            pot += scaled_eval(pots.v1, params.epsilon, x);
    } else {
        if (params.include_inner_potential) {
            const double e = params.epsilon;
            const double v = pots.v0.value(x / e) / (e * e);
            if (std::abs(v) > 1e30)
                throw FlowError("outer V0 term overflow: integration too close to tau = 0");
            pot += v;
        }
        if (params.include_outer_potential) pot += pots.v1.value(x);
    }
    return pot;
}

double AngularSystem::potential_at_zero() const {
    double pot = 0.0;
    if (scale == Scale::inner) {
        if (params.include_inner_potential) pot += pots.v0.value_at_zero();
        if (params.include_outer_potential)
            pot += params.epsilon * params.epsilon * pots.v1.value_at_zero();
    } else {
        if (params.include_inner_potential)
            pot += pots.v0.value_at_zero() / (params.epsilon * params.epsilon);
        if (params.include_outer_potential) pot += pots.v1.value_at_zero();
    }
    return pot;
}

void AngularSystem::rhs(double angle, double radius, double& d_angle,
                        double& d_radius) const {
    const double u = 1.0 - radius;
    d_radius = radius * u * u;
    const double pot = potential_term(radius);
    const double st = std::sin(angle), ct = std::cos(angle);
    d_angle = (radius - 1.0) * std::sin(2.0 * angle) +
              radius * ((params.eigen_param + pot) * ct * ct - st * st);
}

AngularState AngularSystem::rhs(const AngularState& state) const {
    AngularState d;
    rhs(state.angle, state.radius, d.angle, d.radius);
    return d;
}

std::array<AngularState, 4> fixed_points(double lambda) {
    if (lambda < 0.0)
        throw std::invalid_argument("fixed_points: lambda must be >= 0");
    const double a = std::atan(std::sqrt(lambda));
    return {AngularState{0.0, 0.0}, AngularState{M_PI / 2.0, 0.0},
            AngularState{-a, 1.0}, AngularState{+a, 1.0}};
}

double s_of_radius(double radius) {
    const double r = radius / (1.0 - radius);
    return r + std::log(r);
}

StepControl StepControl::tightened(double factor) const {
    StepControl c = *this;
    c.rtol /= factor;
    c.atol /= factor;
    return c;
}

const TrajectoryEvent& Trajectory::event_at(double section) const {
    for (const auto& e : events)
        if (e.section == section) return e;
    throw std::out_of_range("trajectory has no event at the requested section");
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

struct State2 {
    double th, rad;
};

struct Deriv2 {
    double th, rad;
};

// Cubic Hermite interpolation over one accepted step.
State2 hermite(const State2& y0, const Deriv2& f0, const State2& y1,
               const Deriv2& f1, double h, double t) {
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return {h00 * y0.th + h10 * h * f0.th + h01 * y1.th + h11 * h * f1.th,
            h00 * y0.rad + h10 * h * f0.rad + h01 * y1.rad + h11 * h * f1.rad};
}

constexpr double kAngleStepCap = 0.45 * M_PI;  // keeps the lift unambiguous
constexpr double kMinStep = 1e-14;

}  // namespace

Trajectory integrate(const AngularSystem& system, AngularState start, double s0,
                     Direction direction, double radius_stop,
                     std::span<const double> sections, const StepControl& ctl,
                     double s_limit_pad, bool record_samples) {
    if (!(start.radius > 0.0 && start.radius < 1.0))
        throw std::invalid_argument("integrate: start radius must lie in (0, 1)");
    const double dir = direction == Direction::forward ? 1.0 : -1.0;
    const bool up = radius_stop > start.radius;
    if ((direction == Direction::forward) != up)
        throw std::invalid_argument("integrate: radius_stop is behind the start");

    // Sections sorted in travel order, all strictly between start and stop.
    std::vector<double> secs(sections.begin(), sections.end());
    std::sort(secs.begin(), secs.end());
    if (!up) std::reverse(secs.begin(), secs.end());
    for (double sec : secs) {
        const bool inside = up ? (sec > start.radius && sec < radius_stop)
                               : (sec < start.radius && sec > radius_stop);
        if (!inside)
            throw std::invalid_argument(
                "integrate: sections must lie strictly between start and stop radii");
    }

    Trajectory traj;
    traj.system = system;
    traj.direction = direction;
    traj.samples.reserve(record_samples ? 2048 : 2);

    const double s_limit = s_of_radius(radius_stop) + dir * s_limit_pad;

    State2 y{start.angle, start.radius};
    double s = s0;
    if (record_samples || traj.samples.empty())
        traj.samples.push_back({s, {y.th, y.rad}});

    Deriv2 k1;
    system.rhs(y.th, y.rad, k1.th, k1.rad);
    double h = dir * std::min(std::abs(ctl.h_init), ctl.h_max);
    std::size_t next_sec = 0;
    long steps = 0;

    const auto locate_crossing = [&](const State2& y1, const Deriv2& k7,
                                     double target) {
        // radius is monotone along the flow; bisect the Hermite interpolant
        double lo = 0.0, hi = 1.0;
        const double side0 = y.rad - target;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            const State2 ym = hermite(y, k1, y1, k7, h, mid);
            if ((ym.rad - target) * side0 > 0.0)
                lo = mid;
            else
                hi = mid;
            if (std::abs(ym.rad - target) <= 1e-13) {
                lo = hi = mid;
                break;
            }
        }
        const double t = 0.5 * (lo + hi);
        State2 ye = hermite(y, k1, y1, k7, h, t);
        ye.rad = target;  // |interpolated radius - target| <= 1e-12 by construction
        return std::pair<double, State2>{s + t * h, ye};
    };

    while (true) {
        if (steps++ >= ctl.max_steps)
            throw FlowError("integrate: max_steps exceeded");
        if (dir * (s - s_limit) >= 0.0) break;  // radius stop never reached
        if (std::abs(h) > ctl.h_max) h = dir * ctl.h_max;
        if (dir * (s + h - s_limit) > 0.0) h = s_limit - s;

        // DP5(4) stages (FSAL)
        Deriv2 k2, k3, k4, k5, k6, k7;
        State2 t;
        t = {y.th + h * a21 * k1.th, y.rad + h * a21 * k1.rad};
        system.rhs(t.th, t.rad, k2.th, k2.rad);
        t = {y.th + h * (a31 * k1.th + a32 * k2.th),
             y.rad + h * (a31 * k1.rad + a32 * k2.rad)};
        system.rhs(t.th, t.rad, k3.th, k3.rad);
        t = {y.th + h * (a41 * k1.th + a42 * k2.th + a43 * k3.th),
             y.rad + h * (a41 * k1.rad + a42 * k2.rad + a43 * k3.rad)};
        system.rhs(t.th, t.rad, k4.th, k4.rad);
        t = {y.th + h * (a51 * k1.th + a52 * k2.th + a53 * k3.th + a54 * k4.th),
             y.rad + h * (a51 * k1.rad + a52 * k2.rad + a53 * k3.rad + a54 * k4.rad)};
        system.rhs(t.th, t.rad, k5.th, k5.rad);
        t = {y.th + h * (a61 * k1.th + a62 * k2.th + a63 * k3.th + a64 * k4.th +
                         a65 * k5.th),
             y.rad + h * (a61 * k1.rad + a62 * k2.rad + a63 * k3.rad +
                          a64 * k4.rad + a65 * k5.rad)};
        system.rhs(t.th, t.rad, k6.th, k6.rad);
        State2 y1{y.th + h * (b1 * k1.th + b3 * k3.th + b4 * k4.th + b5 * k5.th +
                              b6 * k6.th),
                  y.rad + h * (b1 * k1.rad + b3 * k3.rad + b4 * k4.rad +
                               b5 * k5.rad + b6 * k6.rad)};
        system.rhs(y1.th, y1.rad, k7.th, k7.rad);

        const double et = h * (e1 * k1.th + e3 * k3.th + e4 * k4.th + e5 * k5.th +
                               e6 * k6.th + e7 * k7.th);
        const double er = h * (e1 * k1.rad + e3 * k3.rad + e4 * k4.rad +
                               e5 * k5.rad + e6 * k6.rad + e7 * k7.rad);
        const double wt = ctl.atol + ctl.rtol * std::max(std::abs(y.th), std::abs(y1.th));
        const double wr =
            ctl.atol + ctl.rtol * std::max(std::abs(y.rad), std::abs(y1.rad));
        const double err =
            std::sqrt(0.5 * ((et / wt) * (et / wt) + (er / wr) * (er / wr)));

        const bool lift_ok = std::abs(y1.th - y.th) < kAngleStepCap;
        if (std::isfinite(err) && err <= 1.0 && lift_ok) {
            // events at pending sections inside this step
            while (next_sec < secs.size()) {
                const double sec = secs[next_sec];
                if ((y.rad - sec) * (y1.rad - sec) > 0.0) break;
                auto [se, ye] = locate_crossing(y1, k7, sec);
                traj.events.push_back({sec, se, {ye.th, ye.rad}});
                if (record_samples) traj.samples.push_back({se, {ye.th, ye.rad}});
                ++next_sec;
            }
            // terminal radius stop
            if ((y.rad - radius_stop) * (y1.rad - radius_stop) <= 0.0) {
                auto [se, ye] = locate_crossing(y1, k7, radius_stop);
                traj.samples.push_back({se, {ye.th, ye.rad}});
                traj.hit_radius_stop = true;
                traj.accepted_steps++;
                break;
            }
            y = y1;
            s += h;
            k1 = k7;
            traj.accepted_steps++;
            if (record_samples) traj.samples.push_back({s, {y.th, y.rad}});
            const double fac =
                err == 0.0 ? 5.0
                           : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
            h *= fac;
        } else {
            const double fac = !std::isfinite(err) ? 0.2
                               : err <= 1.0        ? 0.5  // angle cap rejection
                                      : std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= fac;
            if (std::abs(h) < kMinStep)
                throw FlowError("integrate: step size collapse (stiffness)");
        }
    }
    if (!traj.hit_radius_stop)
        traj.samples.push_back({s, {y.th, y.rad}});
    return traj;
}

}  // namespace specscales
