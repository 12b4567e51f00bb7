#ifndef SPECSCALES_REPORT_HPP
#define SPECSCALES_REPORT_HPP

#include <json.hpp>

#include <optional>
#include <string>

#include "specscales/odeflow.hpp"
#include "specscales/oracle.hpp"
#include "specscales/potentials.hpp"
#include "specscales/spectrum.hpp"

namespace specscales {

using json = nlohmann::ordered_json;

/// One run's configuration; every field has a documented default and the
/// whole document round-trips through JSON.
struct RunConfig {
    std::optional<int> scenario;  // preset id; otherwise v0/v1 below
    PotentialSpec v0 = PotentialSpec::zero();
    PotentialSpec v1 = PotentialSpec::zero();
    double epsilon = 0.1;
    double alpha = -0.45;
    std::optional<double> gamma;  // enables the threshold footnote check
    double eigen_floor = 1e-6;
    double mu_lo = 0.0, mu_hi = 0.0;  // mu_hi <= 0: auto 1.25*sup|V1_-|
    int mu_n = 512;
    double lambda_split = 0.0;  // <= 0: auto eps^2 * mu_max
    StepControl tolerances;
    double delta_seed = 1e-6;
    double delta_seed_center = 1e-3;
    bool paranoid = false;
    bool oracle_enabled = true;
    int oracle_N = 4000;
    double oracle_R = 0.0;  // <= 0: auto per operator
    bool parallel = true;
    std::string which = "full";  // count subcommand: full | v0_only | v1_only
    std::string out_dir = "out";

    CompositePotential potentials() const;  // resolves scenario presets
    Exec exec() const { return parallel ? Exec::parallel : Exec::serial; }
};

RunConfig parse_config(const json& doc);
RunConfig load_config_file(const std::string& path);

json potential_to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const json& j);

/// Deterministic JSON rendering: ordered keys, floats at 17 significant
/// digits, LF newline at the end.  Identical documents render byte-identically.
std::string render_json(const json& doc);
void write_json_file(const std::string& path, const json& doc);

/// Trajectory CSV: header row, ',' separator, '\n' endings, one row per
/// accepted step plus event rows flagged in the `event` column.  Column
/// names are s,sigma,theta for inner-scale flows and t,tau,psi for outer
/// ones; branch_k is appended when a lift offset applies.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          std::optional<int> branch_k = std::nullopt,
                          double branch_offset = 0.0);
std::string csv_number(double v);

}  // namespace specscales

#endif
