#ifndef SPECSCALES_POTENTIALS_HPP
#define SPECSCALES_POTENTIALS_HPP

#include <span>
#include <string>
#include <vector>

namespace specscales {

/// Closed family of analytic radial potential profiles.  Every form is
/// smooth on r >= 0 and finite at r = 0; composites are built with Sum.
enum class PotentialForm {
    gaussian,          ///< a * exp(-(b r)^2)
    sech,              ///< a * sech(b r)
    sech2,             ///< a / cosh^2(b r)
    rational_quartic,  ///< a / (1 + b r^4)
    lorentzian_sq,     ///< a / (1 + r^2)^2
    sum,               ///< sum of sub-terms
};

struct PotentialSpec {
    PotentialForm form = PotentialForm::sum;
    double a = 0.0;
    double b = 1.0;
    std::vector<PotentialSpec> terms;  // only for Form::sum

    static PotentialSpec gaussian(double a, double b = 1.0);
    static PotentialSpec sech(double a, double b = 1.0);
    static PotentialSpec sech2(double a, double b = 1.0);
    static PotentialSpec rational_quartic(double a, double b = 1.0);
    static PotentialSpec lorentzian_sq(double a);
    static PotentialSpec zero();  // empty sum
    static PotentialSpec make_sum(std::vector<PotentialSpec> parts);

    double operator()(double r) const { return value(r); }
    double value(double r) const;
    /// Closed-form dV/dr.
    double derivative(double r) const;
    double value_at_zero() const;
    /// sup_r of the negative part |V_-|; exact for leaf forms (attained at r=0),
    /// sampled scan for sums.
    double sup_negative_part() const;
    bool is_zero() const;

    bool operator==(const PotentialSpec&) const = default;
};

/// Decay constants of assumptions (A1)/(A2): |V'(r)| <= C1/r^{3+gamma},
/// |V0(r)| <= C0/r^{4+gamma} for r >= 1.
struct DecayParams {
    double C0 = 100.0;
    double C1 = 100.0;
    double gamma = 1.0;

    void validate() const;  // throws std::invalid_argument on nonpositive fields
};

/// Two-scale composite W_eps(r) = V0(r) + eps^2 V1(eps r).
struct CompositePotential {
    PotentialSpec v0;
    PotentialSpec v1;
    double epsilon = 0.1;

    void validate() const;
    double w(double r) const;  // W_eps(r)
};

double eval(const PotentialSpec& spec, double r);
/// eps^2 * V1(eps r); rejects eps <= 0.
double scaled_eval(const PotentialSpec& v1, double epsilon, double r);

struct DecaySample {
    double r = 0.0;
    double abs_dv = 0.0, a1_bound = 0.0;
    double abs_v = 0.0, a2_bound = 0.0;
    bool a1_ok = false, a2_ok = false;
};

struct DecayReport {
    std::vector<DecaySample> samples;
    bool a1_all = true;
    bool a2_all = true;
};

/// Checks the (A1)/(A2) bounds per sample; advisory, never throws on failures
/// (only on an empty grid or samples below r = 1).
DecayReport verify_decay(const PotentialSpec& spec, const DecayParams& params,
                         std::span<const double> r_samples);

/// 4*pi * Int_0^inf V_-(r)^{3/2} r^2 dr, relative error <= 1e-8.
/// Throws if the integral has not converged past the r = 1e6 cutoff.
double clr_integral(const PotentialSpec& spec);
/// Same integral for the scaled member eps^2 V1(eps r) of a two-scale family;
/// equals clr_integral(v1) identically (the 3/2 power absorbs the scaling).
double clr_integral(const PotentialSpec& v1, double epsilon);

std::string form_name(PotentialForm f);
PotentialForm form_from_name(const std::string& name);

}  // namespace specscales

#endif
