// spectral-scales: eigenvalue counting and localization for radial
// Schrodinger operators with two-scale potentials, via compactified
// angular flows cross-checked by a finite-difference Sturm oracle.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "specscales/manifolds.hpp"
#include "specscales/oracle.hpp"
#include "specscales/report.hpp"
#include "specscales/scenario.hpp"
#include "specscales/spectrum.hpp"

namespace specscales {
namespace {

namespace fs = std::filesystem;

ManifoldOptions manifold_options(const RunConfig& cfg) {
    ManifoldOptions m;
    m.delta_seed = cfg.delta_seed;
    m.delta_seed_center = cfg.delta_seed_center;
    m.paranoid = cfg.paranoid;
    return m;
}

json count_to_json(const CountResult& c) {
    json j;
    j["m"] = c.m;
    j["theta_start"] = c.theta_start;
    j["theta_end"] = c.theta_end;
    j["eigen_param_floor"] = c.eigen_param_floor;
    j["system"] = c.system;
    j["near_degenerate"] = c.near_degenerate;
    return j;
}

RadialGrid oracle_grid(const RunConfig& cfg, OperatorKind which, double lam_min) {
    RadialGrid g = oracle_grid_for(which, lam_min);
    if (cfg.oracle_R > 0.0) g.R = cfg.oracle_R;
    if (cfg.oracle_N != 4000 && cfg.oracle_N >= 16)
        g.N = cfg.oracle_N;
    return g;
}

void write_family_csv(const fs::path& path, Scale scale,
                      const std::vector<std::tuple<double, double, Trajectory>>& family) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    const bool inner = scale == Scale::inner;
    os << "mu,branch_k," << (inner ? "s,sigma,theta" : "t,tau,psi") << ",event\n";
    for (const auto& [mu, offset, traj] : family) {
        const int k = static_cast<int>(std::llround(offset / M_PI));
        std::size_t ev = 0;
        for (const auto& smp : traj.samples) {
            bool is_event = false;
            if (ev < traj.events.size() && smp.s == traj.events[ev].s) {
                is_event = true;
                ++ev;
            }
            os << csv_number(mu) << ',' << k << ',' << csv_number(smp.s) << ','
               << csv_number(smp.state.radius) << ','
               << csv_number(smp.state.angle + offset) << ',' << (is_event ? 1 : 0)
               << '\n';
        }
    }
}

int cmd_scenario(const RunConfig& cfg, int id, bool quiet) {
    const Scenario sc = scenario_preset(id, cfg.epsilon);
    const CompositePotential& pots = sc.pots;
    const StepControl& ctl = cfg.tolerances;
    CountOptions copts;
    copts.eigen_floor = cfg.eigen_floor;
    copts.manifold = manifold_options(cfg);

    const SumRuleReport sum = verify_sum_rule(pots, copts, ctl);
    const Thresholds th = make_thresholds(cfg.epsilon, cfg.alpha, cfg.gamma);

    GapSearchOptions gopts;
    gopts.mu_max = cfg.mu_hi;  // <= 0: auto
    gopts.grid_n = cfg.mu_n;
    gopts.exec = cfg.exec();
    gopts.manifold = copts.manifold;
    const GapSearchResult gap = find_gap_eigenvalues(pots, th, gopts, ctl);
    const bool regime_ok = static_cast<int>(gap.roots.size()) == sum.m_v1;

    const double lambda_split =
        cfg.lambda_split > 0.0 ? cfg.lambda_split : default_lambda_split(pots);
    O1SearchOptions o1opts;
    o1opts.lambda_min = lambda_split;
    o1opts.exec = cfg.exec();
    o1opts.manifold = copts.manifold;
    const std::vector<O1Root> o1 = find_order_one_eigenvalues(pots, o1opts, ctl);

    // oracle cross-checks; R sized for the smallest located eigenvalue
    bool oracle_agree = true;
    json joracle;
    int band_count = -1;
    if (cfg.oracle_enabled) {
        const double lam_min_hint =
            gap.roots.empty() ? 0.0 : gap.roots.front().lambda_hat;
        const OracleCount ov0 = oracle_count(
            pots, OperatorKind::model_inner, 0.0,
            oracle_grid(cfg, OperatorKind::model_inner, 0.0));
        const OracleCount ov1 = oracle_count(
            pots, OperatorKind::model_outer, 0.0,
            oracle_grid(cfg, OperatorKind::model_outer, 0.0));
        const RadialGrid gw = oracle_grid(cfg, OperatorKind::full, lam_min_hint);
        const OracleCount ow = oracle_count(pots, OperatorKind::full, 0.0, gw);
        const OracleCount above_split =
            oracle_count(pots, OperatorKind::full, lambda_split, gw);
        band_count = ow.count - above_split.count;
        oracle_agree = ov0.count == sum.m_v0 && ov1.count == sum.m_v1 &&
                       ow.count == sum.m_w;
        joracle["m_v0"] = ov0.count;
        joracle["m_v1"] = ov1.count;
        joracle["m_w"] = ow.count;
        joracle["band_count"] = band_count;
        joracle["band_expected_m_v1"] = sum.m_v1;
        joracle["grid_R"] = gw.R;
        joracle["grid_N"] = gw.N;
    }

    // figure data: unstable-manifold lifts per branch and the outer
    // center-manifold family, mu in (0, 1)
    fs::create_directories(cfg.out_dir);
    const int n_mu = 16;
    std::vector<std::tuple<double, double, Trajectory>> inner_family, outer_family;
    for (int i = 1; i <= n_mu; ++i) {
        const double mu = static_cast<double>(i) / (n_mu + 1);
        AngularSystem fin{Scale::inner,
                          {cfg.epsilon * cfg.epsilon * mu, cfg.epsilon, true, true},
                          pots};
        const Trajectory base =
            unstable_trajectory(fin, 1.0 - 1e-6, {}, ctl, copts.manifold);
        for (double off : sc.inner_branch_offsets)
            inner_family.emplace_back(mu, off, base);
        AngularSystem fout{Scale::outer, {mu, cfg.epsilon, true, true}, pots};
        outer_family.emplace_back(
            mu, sc.outer_branch_offset,
            center_trajectory_backward(fout, 1e-3, {}, ctl, copts.manifold));
    }
    write_family_csv(fs::path(cfg.out_dir) / "inner_manifolds.csv", Scale::inner,
                     inner_family);
    write_family_csv(fs::path(cfg.out_dir) / "outer_manifolds.csv", Scale::outer,
                     outer_family);

    json rep;
    rep["scenario"] = id;
    rep["epsilon"] = cfg.epsilon;
    rep["m_v0"] = sum.m_v0;
    rep["m_v1"] = sum.m_v1;
    rep["m_w"] = sum.m_w;
    json jgap = json::array();
    for (const auto& r : gap.roots) {
        json jr;
        jr["mu"] = r.mu_hat;
        jr["lambda"] = r.lambda_hat;
        jr["k"] = r.k;
        jr["residual"] = r.residual;
        jr["slope_sign"] = r.slope_sign;
        jgap.push_back(jr);
    }
    rep["gap_eigenvalues"] = jgap;
    json jo1 = json::array();
    for (const auto& r : o1) jo1.push_back(r.lambda);
    rep["o1_eigenvalues"] = jo1;
    rep["oracle_agreement"] = oracle_agree;
    rep["sum_rule_holds"] = sum.equal;
    rep["gap_count_matches_m_v1"] = regime_ok;
    rep["alpha"] = cfg.alpha;
    rep["mu_max"] = gap.mu_max;
    rep["lambda_split"] = lambda_split;
    json jth;
    jth["r_eps"] = th.r_eps;
    jth["rho_eps"] = th.rho_eps;
    jth["sigma_eps"] = th.sigma_eps;
    jth["tau_eps"] = th.tau_eps;
    jth["s_eps"] = th.s_eps;
    jth["t_eps"] = th.t_eps;
    rep["thresholds"] = jth;
    rep["counts"] = json::object();
    rep["counts"]["v0"] = count_to_json(sum.v0_detail);
    rep["counts"]["v1"] = count_to_json(sum.v1_detail);
    rep["counts"]["w"] = count_to_json(sum.w_detail);
    if (cfg.oracle_enabled) rep["oracle"] = joracle;
    write_json_file((fs::path(cfg.out_dir) / "report.json").string(), rep);

    if (!quiet) {
        std::cout << "scenario " << id << " (epsilon " << cfg.epsilon << "): m(V0)="
                  << sum.m_v0 << " m(V1)=" << sum.m_v1 << " m(W)=" << sum.m_w
                  << (sum.equal ? "  [sum rule holds]" : "  [sum rule FAILS]")
                  << (oracle_agree ? "  [oracle agrees]" : "  [oracle DISAGREES]")
                  << "\n"
                  << "report: " << (fs::path(cfg.out_dir) / "report.json").string()
                  << "\n";
        if (!regime_ok)
            std::cout << "note: gap-root count " << gap.roots.size() << " != m(V1) "
                      << sum.m_v1
                      << " -- theorem-regime violation (epsilon too large)\n";
    }
    if (!sum.equal) return 2;
    if (!oracle_agree) return 3;
    return 0;
}

int cmd_count(const RunConfig& cfg, const std::string& out_path) {
    const CompositePotential pots = cfg.potentials();
    const OperatorKind kind = cfg.which == "v0_only" ? OperatorKind::model_inner
                              : cfg.which == "v1_only" ? OperatorKind::model_outer
                                                       : OperatorKind::full;
    CountOptions copts;
    copts.eigen_floor = cfg.eigen_floor;
    copts.manifold = manifold_options(cfg);
    const CountResult res = count_positive_eigenvalues(pots, kind, copts, cfg.tolerances);

    json j = count_to_json(res);
    j["which"] = cfg.which;
    bool agree = true;
    if (cfg.oracle_enabled) {
        const OracleCount oc =
            oracle_count(pots, kind, 0.0, oracle_grid(cfg, kind, 0.0));
        agree = oc.count == res.m;
        j["oracle_count"] = oc.count;
        j["oracle_agreement"] = agree;
    }
    const std::string text = render_json(j);
    if (out_path.empty())
        std::cout << text;
    else {
        std::ofstream os(out_path, std::ios::binary);
        os << text;
    }
    return agree ? 0 : 3;
}

int cmd_match(const RunConfig& cfg, const std::string& out_path) {
    const CompositePotential pots = cfg.potentials();
    const Thresholds th = make_thresholds(cfg.epsilon, cfg.alpha, cfg.gamma);
    const double mu_max =
        cfg.mu_hi > 0.0 ? cfg.mu_hi : 1.25 * pots.v1.sup_negative_part();
    if (!(mu_max > cfg.mu_lo))
        throw std::invalid_argument("match: empty mu grid (is V1 zero?)");
    std::vector<double> grid(cfg.mu_n);
    for (int i = 0; i < cfg.mu_n; ++i)
        grid[i] = cfg.mu_lo + (mu_max - cfg.mu_lo) * (i + 1.0) / cfg.mu_n;

    const MismatchCurve curve = scan_mismatch(pots, th, grid, cfg.tolerances,
                                              cfg.exec(), manifold_options(cfg));
    double lo = 1e300, hi = -1e300;
    for (double v : curve.sigma0)
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const int k_lo = static_cast<int>(std::floor(-hi / M_PI)) - 1;
    const int k_hi = static_cast<int>(std::ceil(-lo / M_PI)) + 1;

    std::ostringstream os;
    os << "mu";
    for (int k = k_lo; k <= k_hi; ++k) os << ",sigma_k_" << k;
    os << ",root_k,error\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        os << csv_number(grid[i]);
        for (int k = k_lo; k <= k_hi; ++k) os << ',' << csv_number(curve.sigma0[i] + k * M_PI);
        // annotate the branch whose curve changes sign before the next node
        std::string root;
        if (i + 1 < grid.size() && std::isfinite(curve.sigma0[i]) &&
            std::isfinite(curve.sigma0[i + 1])) {
            for (int k = k_lo; k <= k_hi; ++k) {
                if ((curve.sigma0[i] + k * M_PI) * (curve.sigma0[i + 1] + k * M_PI) < 0.0) {
                    root = std::to_string(k);
                    break;
                }
            }
        }
        os << ',' << root << ',' << curve.errors[i] << '\n';
    }
    if (out_path.empty())
        std::cout << os.str();
    else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out_path);
        f << os.str();
    }
    return 0;
}

int cmd_oracle(const RunConfig& cfg, const std::string& out_path, int top_k) {
    const CompositePotential pots = cfg.potentials();
    const OperatorKind kind = cfg.which == "v0_only" ? OperatorKind::model_inner
                              : cfg.which == "v1_only" ? OperatorKind::model_outer
                                                       : OperatorKind::full;
    const RadialGrid g = oracle_grid(cfg, kind, 0.0);
    const OracleCount oc = oracle_count(pots, kind, 0.0, g);
    json j;
    j["which"] = cfg.which;
    j["count"] = oc.count;
    j["ladder"] = json::array({oc.ladder[0], oc.ladder[1], oc.ladder[2]});
    j["grid_R"] = g.R;
    j["grid_N"] = g.N;
    if (top_k > 0 && oc.count > 0) {
        const OracleEigenvalues evs =
            oracle_eigenvalues(pots, kind, std::min(top_k, oc.count), g);
        json arr = json::array();
        for (const auto& ev : evs.values) {
            json je;
            je["value"] = ev.value;
            je["error_bar"] = ev.error_bar;
            arr.push_back(je);
        }
        j["eigenvalues"] = arr;
        j["short_count"] = evs.short_count;
    }
    const std::string text = render_json(j);
    if (out_path.empty())
        std::cout << text;
    else {
        std::ofstream os(out_path, std::ios::binary);
        os << text;
    }
    return 0;
}

json decay_json(const DecayReport& rep) {
    json j;
    j["a1_all"] = rep.a1_all;
    j["a2_all"] = rep.a2_all;
    json arr = json::array();
    for (const auto& s : rep.samples) {
        json js;
        js["r"] = s.r;
        js["abs_dV"] = s.abs_dv;
        js["a1_bound"] = s.a1_bound;
        js["a1_ok"] = s.a1_ok;
        js["abs_V"] = s.abs_v;
        js["a2_bound"] = s.a2_bound;
        js["a2_ok"] = s.a2_ok;
        arr.push_back(js);
    }
    j["samples"] = arr;
    return j;
}

int cmd_decay_check(const RunConfig& cfg, const std::string& out_path,
                    const DecayParams& params) {
    const CompositePotential pots = cfg.potentials();
    std::vector<double> grid;
    for (int r = 1; r <= 50; ++r) grid.push_back(r);
    const DecayReport rv0 = verify_decay(pots.v0, params, grid);
    const DecayReport rv1 = verify_decay(pots.v1, params, grid);
    json j;
    j["C0"] = params.C0;
    j["C1"] = params.C1;
    j["gamma"] = params.gamma;
    j["v0"] = decay_json(rv0);
    j["v1"] = decay_json(rv1);
    json warnings = json::array();
    if (!rv0.a1_all) warnings.push_back("V0 violates the (A1) derivative bound on the grid");
    if (!rv0.a2_all) warnings.push_back("V0 violates the (A2) decay bound on the grid");
    if (!rv1.a1_all) warnings.push_back("V1 violates the (A1) derivative bound on the grid");
    if (!rv1.a2_all)
        warnings.push_back("V1 decays slower than the (A2) rate (informational; (A2) binds V0)");
    const Thresholds th = make_thresholds(cfg.epsilon, cfg.alpha, params.gamma);
    if (!th.footnote_ok)
        warnings.push_back("(4+gamma)(-alpha) > 2 + gamma/4 fails for this alpha, gamma");
    j["warnings"] = warnings;
    const std::string text = render_json(j);
    if (out_path.empty())
        std::cout << text;
    else {
        std::ofstream os(out_path, std::ios::binary);
        os << text;
    }
    return 0;  // advisory
}

}  // namespace
}  // namespace specscales

int main(int argc, char** argv) {
    using namespace specscales;
    CLI::App app{
        "spectral-scales: positive-spectrum counts for radial Schrodinger "
        "operators Delta - (V0 + eps^2 V1(eps r)) via compactified Prufer "
        "flows, with a finite-difference Sturm-sequence cross-check"};
    app.require_subcommand(1);

    std::string config_path, out_path, out_dir;
    int scenario_id = 1;
    double epsilon = 0.1;
    int top_k = 4;
    DecayParams decay;

    auto* sc = app.add_subcommand("scenario",
                                  "run a benchmark scenario end to end and write "
                                  "report.json plus manifold-family CSVs");
    sc->add_option("--id", scenario_id, "scenario id (1, 2, or 3)")
        ->check(CLI::Range(1, 3));
    sc->add_option("--epsilon", epsilon, "scale parameter (default 0.1)");
    sc->add_option("--out", out_dir, "output directory (default: out)");
    sc->add_option("--config", config_path, "optional JSON config overriding defaults");

    auto* cnt = app.add_subcommand("count",
                                   "count positive eigenvalues of the configured "
                                   "operator (winding + oracle); exit 3 on disagreement");
    cnt->add_option("--config", config_path, "JSON config")->required();
    cnt->add_option("--out", out_path, "write the JSON result here instead of stdout");

    auto* mat = app.add_subcommand("match",
                                   "export the matching curves Sigma^k(mu) as CSV");
    mat->add_option("--config", config_path, "JSON config")->required();
    mat->add_option("--out", out_path, "write the CSV here instead of stdout");

    auto* orc = app.add_subcommand("oracle",
                                   "finite-difference Sturm counts and eigenvalues");
    orc->add_option("--config", config_path, "JSON config")->required();
    orc->add_option("--out", out_path, "write the JSON result here instead of stdout");
    orc->add_option("--top-k", top_k, "number of eigenvalues to extract (default 4)");

    auto* dec = app.add_subcommand("decay-check",
                                   "advisory (A1)/(A2) decay audit on r in [1, 50]");
    dec->add_option("--config", config_path, "JSON config")->required();
    dec->add_option("--out", out_path, "write the JSON report here instead of stdout");
    dec->add_option("--C0", decay.C0, "A2 constant (default 100)");
    dec->add_option("--C1", decay.C1, "A1 constant (default 100)");
    dec->add_option("--gamma", decay.gamma, "decay exponent gamma (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        if (sc->parsed()) {
            if (sc->count("--epsilon")) cfg.epsilon = epsilon;
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            return cmd_scenario(cfg, scenario_id, false);
        }
        if (cnt->parsed()) return cmd_count(cfg, out_path);
        if (mat->parsed()) return cmd_match(cfg, out_path);
        if (orc->parsed()) return cmd_oracle(cfg, out_path, top_k);
        if (dec->parsed()) return cmd_decay_check(cfg, out_path, decay);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
