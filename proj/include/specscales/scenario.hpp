#ifndef SPECSCALES_SCENARIO_HPP
#define SPECSCALES_SCENARIO_HPP

#include <vector>

#include "specscales/potentials.hpp"

namespace specscales {

/// The three benchmark potential pairs:
///   1: V0 = -2.8 exp(-r^2),        V1 = -30 exp(-rho^2)
///   2: V0 = -2.6 / (1 + 2 r^4),    V1 = -20 sech(rho)
///   3: V0 = -3 / cosh^2(1.2 r),    V1 = -30 / (1 + rho^2)^2
struct Scenario {
    int id = 0;
    CompositePotential pots;          // epsilon defaults to 0.1
    std::vector<double> inner_branch_offsets;  // figure lifts: 0, pi, 2pi (+3pi for 2)
    double outer_branch_offset = 0.0;          // figure lift of the center family
};

Scenario scenario_preset(int id, double epsilon = 0.1);

}  // namespace specscales

#endif
