#ifndef SPECSCALES_ODEFLOW_HPP
#define SPECSCALES_ODEFLOW_HPP

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "specscales/potentials.hpp"

namespace specscales {

/// Lifted (unwrapped) angle plus compactified radius on one scale:
/// (theta, sigma) for the inner system, (psi, tau) for the outer one.
struct AngularState {
    double angle = 0.0;
    double radius = 0.0;  // in [0, 1]
};

/// Which compactified scale a flow lives on.  The inner scale uses
/// r = sigma/(1-sigma), the outer one rho = tau/(1-tau) with rho = eps*r.
enum class Scale { inner, outer };

/// Flow configuration.  eigen_param is lambda for inner-scale systems and mu
/// for outer-scale ones; the include flags select the model problems.
struct FlowParams {
    double eigen_param = 0.0;
    double epsilon = 1.0;
    bool include_inner_potential = true;
    bool include_outer_potential = true;
};

/// One compactified angular system: angle' = (radius-1) sin(2a)
///   + radius ((E + P(radius)) cos^2 a - sin^2 a),  radius' = radius (1-radius)^2,
/// where P collects the extended potentials of the chosen scale.
struct AngularSystem {
    Scale scale = Scale::inner;
    FlowParams params;
    CompositePotential pots;

    /// Extended potential term at the compactified radius; exactly 0 at radius 1.
    /// Throws FlowError if the outer V0 term exceeds the 1e30 overflow guard.
    double potential_term(double radius) const;
    /// Potential term at radius 0 (used for manifold seeding).
    double potential_at_zero() const;
    void rhs(double angle, double radius, double& d_angle, double& d_radius) const;
    AngularState rhs(const AngularState& state) const;
};

/// V0(sigma/(1-sigma)) for sigma < 1, exactly 0 at sigma = 1.
double extended_V0(const PotentialSpec& v0, double sigma);
/// eps^2 V1(eps * sigma/(1-sigma)) for sigma < 1, exactly 0 at sigma = 1.
double extended_V1eps(const PotentialSpec& v1, double epsilon, double sigma);

/// The four equilibria of the inner angular system for lambda >= 0:
/// (0,0), (0,pi/2), (1, arctan(-sqrt(lambda))), (1, arctan(+sqrt(lambda))).
/// AngularState stores {angle, radius}.
std::array<AngularState, 4> fixed_points(double lambda);

struct StepControl {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 1e-4;
    // No practical cap: accuracy control plus the pi/2 angle-step restriction
    // bound the step; reaching radius 1-1e-6 spans s ~ 1e6.
    double h_max = 1e9;
    long max_steps = 50'000'000;

    StepControl tightened(double factor) const;
};

enum class Direction { forward, backward };

struct TrajectorySample {
    double s = 0.0;  // desingularized independent variable (s or t)
    AngularState state;
};

struct TrajectoryEvent {
    double section = 0.0;  // requested radius value
    double s = 0.0;
    AngularState state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<TrajectoryEvent> events;
    AngularSystem system;
    Direction direction = Direction::forward;
    bool hit_radius_stop = false;
    long accepted_steps = 0;

    const AngularState& end_state() const { return samples.back().state; }
    double end_angle() const { return samples.back().state.angle; }
    /// Event state for the given section radius; throws if absent.
    const TrajectoryEvent& event_at(double section) const;
};

class FlowError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Adaptive Dormand-Prince 5(4) integration of one angular system in the
/// desingularized variable, from `start` at s = s0 until the radius crosses
/// `radius_stop` (event-interpolated to |radius - stop| <= 1e-12) or s
/// passes s_limit.  Requested sections must lie strictly between the start
/// radius and radius_stop; each is event-interpolated.  The lift is kept
/// valid by rejecting steps with |d angle| >= 0.45*pi.
Trajectory integrate(const AngularSystem& system, AngularState start, double s0,
                     Direction direction, double radius_stop,
                     std::span<const double> sections, const StepControl& ctl,
                     double s_limit_pad = 100.0, bool record_samples = true);

/// Desingularized variable at a compactified radius: s = r + ln r with
/// r = radius/(1-radius); the paper's parameterization (sigma(1) = 1/2).
double s_of_radius(double radius);

}  // namespace specscales

#endif
