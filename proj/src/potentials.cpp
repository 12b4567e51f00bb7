#include "specscales/potentials.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace specscales {

namespace {

// sech(x) evaluated through exp(-x) so large arguments underflow to 0
// instead of overflowing cosh.
double stable_sech(double x) {
    const double e = std::exp(-std::abs(x));
    return 2.0 * e / (1.0 + e * e);
}

void require_finite_radius(double r) {
    if (!std::isfinite(r) || r < 0.0)
        throw std::invalid_argument("potential evaluation needs finite r >= 0");
}

}  // namespace

PotentialSpec PotentialSpec::gaussian(double a, double b) {
    return {PotentialForm::gaussian, a, b, {}};
}
PotentialSpec PotentialSpec::sech(double a, double b) {
    return {PotentialForm::sech, a, b, {}};
}
PotentialSpec PotentialSpec::sech2(double a, double b) {
    return {PotentialForm::sech2, a, b, {}};
}
PotentialSpec PotentialSpec::rational_quartic(double a, double b) {
    return {PotentialForm::rational_quartic, a, b, {}};
}
PotentialSpec PotentialSpec::lorentzian_sq(double a) {
    return {PotentialForm::lorentzian_sq, a, 1.0, {}};
}
PotentialSpec PotentialSpec::zero() { return {PotentialForm::sum, 0.0, 1.0, {}}; }
PotentialSpec PotentialSpec::make_sum(std::vector<PotentialSpec> parts) {
    return {PotentialForm::sum, 0.0, 1.0, std::move(parts)};
}

double PotentialSpec::value(double r) const {
    require_finite_radius(r);
    switch (form) {
        case PotentialForm::gaussian: {
            const double x = b * r;
            return a * std::exp(-x * x);
        }
        case PotentialForm::sech:
            return a * stable_sech(b * r);
        case PotentialForm::sech2: {
            const double s = stable_sech(b * r);
            return a * s * s;
        }
        case PotentialForm::rational_quartic: {
            const double r2 = r * r;
            return a / (1.0 + b * r2 * r2);
        }
        case PotentialForm::lorentzian_sq: {
            const double q = 1.0 + r * r;
            return a / (q * q);
        }
        case PotentialForm::sum: {
            double v = 0.0;
            for (const auto& t : terms) v += t.value(r);
            return v;
        }
    }
    return 0.0;
}

double PotentialSpec::derivative(double r) const {
    require_finite_radius(r);
    switch (form) {
        case PotentialForm::gaussian: {
            const double x = b * r;
            return a * std::exp(-x * x) * (-2.0 * b * x);
        }
        case PotentialForm::sech: {
            const double x = b * r;
            return -a * b * stable_sech(x) * std::tanh(x);
        }
        case PotentialForm::sech2: {
            const double x = b * r;
            const double s = stable_sech(x);
            return -2.0 * a * b * s * s * std::tanh(x);
        }
        case PotentialForm::rational_quartic: {
            const double r2 = r * r;
            const double den = 1.0 + b * r2 * r2;
            return -4.0 * a * b * r2 * r / (den * den);
        }
        case PotentialForm::lorentzian_sq: {
            const double q = 1.0 + r * r;
            return -4.0 * a * r / (q * q * q);
        }
        case PotentialForm::sum: {
            double v = 0.0;
            for (const auto& t : terms) v += t.derivative(r);
            return v;
        }
    }
    return 0.0;
}

double PotentialSpec::value_at_zero() const {
    if (form == PotentialForm::sum) {
        double v = 0.0;
        for (const auto& t : terms) v += t.value_at_zero();
        return v;
    }
    return a;
}

double PotentialSpec::sup_negative_part() const {
    if (form != PotentialForm::sum) {
        // leaf profiles are monotone in |V|, extremal at r = 0
        return a < 0.0 ? -a : 0.0;
    }
    if (terms.empty()) return 0.0;
    double sup = std::max(0.0, -value(0.0));
    for (double r = 1e-3; r <= 1e3; r *= 1.05)
        sup = std::max(sup, -value(r));
    return sup;
}

bool PotentialSpec::is_zero() const {
    if (form == PotentialForm::sum)
        return std::all_of(terms.begin(), terms.end(),
                           [](const PotentialSpec& t) { return t.is_zero(); });
    return a == 0.0;
}

void DecayParams::validate() const {
    if (!(C0 > 0.0) || !(C1 > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("decay parameters must satisfy C0, C1, gamma > 0");
}

void CompositePotential::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("epsilon must be positive and finite");
}

double CompositePotential::w(double r) const {
    return v0.value(r) + scaled_eval(v1, epsilon, r);
}

double eval(const PotentialSpec& spec, double r) { return spec.value(r); }

double scaled_eval(const PotentialSpec& v1, double epsilon, double r) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("scaled_eval: epsilon must be positive");
    return epsilon * epsilon * v1.value(epsilon * r);
}

DecayReport verify_decay(const PotentialSpec& spec, const DecayParams& params,
                         std::span<const double> r_samples) {
    params.validate();
    if (r_samples.empty())
        throw std::invalid_argument("verify_decay: empty sample grid");
    DecayReport rep;
    rep.samples.reserve(r_samples.size());
    for (double r : r_samples) {
        if (!(r >= 1.0) || !std::isfinite(r))
            throw std::invalid_argument("verify_decay: samples must lie in [1, inf)");
        DecaySample s;
        s.r = r;
        s.abs_dv = std::abs(spec.derivative(r));
        s.a1_bound = params.C1 / std::pow(r, 3.0 + params.gamma);
        s.abs_v = std::abs(spec.value(r));
        s.a2_bound = params.C0 / std::pow(r, 4.0 + params.gamma);
        s.a1_ok = s.abs_dv <= s.a1_bound;
        s.a2_ok = s.abs_v <= s.a2_bound;
        rep.a1_all = rep.a1_all && s.a1_ok;
        rep.a2_all = rep.a2_all && s.a2_ok;
        rep.samples.push_back(s);
    }
    return rep;
}

namespace {

double clr_of(const std::function<double(double)>& potential) {
    using boost::math::quadrature::gauss_kronrod;
    const auto integrand = [&potential](double r) {
        const double vm = std::max(-potential(r), 0.0);
        return vm * std::sqrt(vm) * r * r;
    };
    constexpr double cutoff = 1e6;
    double err_main = 0.0, err_tail = 0.0;
    const double main =
        gauss_kronrod<double, 15>::integrate(integrand, 0.0, cutoff, 15, 1e-9, &err_main);
    const double tail = gauss_kronrod<double, 15>::integrate(
        integrand, cutoff, std::numeric_limits<double>::infinity(), 15, 1e-9, &err_tail);
    if (!(std::isfinite(main) && std::isfinite(tail)) ||
        tail > 1e-6 * main + 1e-12)
        throw std::runtime_error("clr_integral: integral not converged past r = 1e6");
    return 4.0 * M_PI * (main + tail);
}

}  // namespace

double clr_integral(const PotentialSpec& spec) {
    if (spec.is_zero()) return 0.0;
    return clr_of([&spec](double r) { return spec.value(r); });
}

double clr_integral(const PotentialSpec& v1, double epsilon) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("clr_integral: epsilon must be positive");
    if (v1.is_zero()) return 0.0;
    return clr_of([&](double r) { return scaled_eval(v1, epsilon, r); });
}

std::string form_name(PotentialForm f) {
    switch (f) {
        case PotentialForm::gaussian: return "gaussian";
        case PotentialForm::sech: return "sech";
        case PotentialForm::sech2: return "sech2";
        case PotentialForm::rational_quartic: return "rational_quartic";
        case PotentialForm::lorentzian_sq: return "lorentzian_sq";
        case PotentialForm::sum: return "sum";
    }
    return "sum";
}

PotentialForm form_from_name(const std::string& name) {
    if (name == "gaussian") return PotentialForm::gaussian;
    if (name == "sech") return PotentialForm::sech;
    if (name == "sech2") return PotentialForm::sech2;
    if (name == "rational_quartic") return PotentialForm::rational_quartic;
    if (name == "lorentzian_sq") return PotentialForm::lorentzian_sq;
    if (name == "sum" || name == "zero") return PotentialForm::sum;
    throw std::invalid_argument("unknown potential form: " + name);
}

}  // namespace specscales
