#ifndef SPECSCALES_MANIFOLDS_HPP
#define SPECSCALES_MANIFOLDS_HPP

#include <span>
#include <vector>

#include "specscales/odeflow.hpp"

namespace specscales {

/// Lifted angle in the covering space R, with branch index k such that
/// value - k*pi lies in [-pi/2, pi/2).
struct LiftedAngle {
    double value = 0.0;
    int branch() const;
};

struct ManifoldOptions {
    double delta_seed = 1e-6;        // radius offset at the radius-0 end
    double delta_seed_center = 1e-3; // radius offset at the radius-1 end (see notes)
    bool paranoid = false;           // re-run with halved seeds and compare
};

/// First-order expansion slope of W^u at the radius-0 saddle:
/// eigen_param + P(0) - 1, with absent potential terms dropped for the
/// model systems.
double seed_slope(const AngularSystem& system);

/// Seed point (angle = slope * delta, radius = delta) for the unstable
/// manifold of the radius-0 saddle.
AngularState seed_unstable(const AngularSystem& system, double delta_seed);

/// Lifted trajectory on W^u of the radius-0 saddle, from the seed up to
/// radius_stop, with events at the requested sections.
Trajectory unstable_trajectory(const AngularSystem& system, double radius_stop,
                               std::span<const double> sections,
                               const StepControl& ctl,
                               const ManifoldOptions& opts = {});

/// Lifted trajectory on W^c of the radius-1 point, obtained by backward
/// integration from (radius = 1 - delta, angle = arctan(-sqrt(eigen_param))).
/// Backward integration is stable toward the center direction; divergence
/// toward the in-plane unstable branch triggers reseeding with a smaller
/// delta (3 retries).
Trajectory center_trajectory_backward(const AngularSystem& system,
                                      double radius_stop,
                                      std::span<const double> sections,
                                      const StepControl& ctl,
                                      const ManifoldOptions& opts = {});

/// Unwraps a mod-pi angle sequence into a continuous lift; rejects jumps
/// >= pi/2 after mod-pi reduction.
std::vector<double> lift(std::span<const double> raw_angles);

/// Branch-preserving conversion tan(theta) = eps * tan(psi): theta shares
/// psi's branch index, with theta - k*pi = +-pi/2 exactly at the poles.
double convert_outer_to_inner_angle(double psi_lifted, double epsilon);

/// Fitted log-log slope of the angle's distance to its nearest pi-multiple
/// vs r, for the model inner trajectory at lambda = 0.  A slope near -2
/// is the regular decay of Lemma-type asymptotics; a slope near -1 warns
/// of a possible zero-energy resonance.
double decay_slope_diagnostic(const CompositePotential& pots, double r_lo = 20.0,
                              double r_hi = 200.0, int n_samples = 10,
                              const StepControl& ctl = {});

}  // namespace specscales

#endif
