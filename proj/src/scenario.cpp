#include "specscales/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace specscales {

Scenario scenario_preset(int id, double epsilon) {
    Scenario sc;
    sc.id = id;
    sc.pots.epsilon = epsilon;
    sc.inner_branch_offsets = {0.0, M_PI, 2.0 * M_PI};
    sc.outer_branch_offset = -2.0 * M_PI;
    switch (id) {
        case 1:
            sc.pots.v0 = PotentialSpec::gaussian(-2.8, 1.0);
            sc.pots.v1 = PotentialSpec::gaussian(-30.0, 1.0);
            break;
        case 2:
            sc.pots.v0 = PotentialSpec::rational_quartic(-2.6, 2.0);
            sc.pots.v1 = PotentialSpec::sech(-20.0, 1.0);
            sc.inner_branch_offsets.push_back(3.0 * M_PI);
            break;
        case 3:
            sc.pots.v0 = PotentialSpec::sech2(-3.0, 1.2);
            sc.pots.v1 = PotentialSpec::lorentzian_sq(-30.0);
            break;
        default:
            throw std::invalid_argument("scenario id must be 1, 2, or 3");
    }
    return sc;
}

}  // namespace specscales
