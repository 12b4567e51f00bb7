#include "specscales/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace specscales {

CompositePotential RunConfig::potentials() const {
    CompositePotential pots{v0, v1, epsilon};
    pots.validate();
    return pots;
}

json potential_to_json(const PotentialSpec& spec) {
    json j;
    j["form"] = form_name(spec.form);
    if (spec.form == PotentialForm::sum) {
        json arr = json::array();
        for (const auto& t : spec.terms) arr.push_back(potential_to_json(t));
        j["terms"] = arr;
        return j;
    }
    j["a"] = spec.a;
    if (spec.form != PotentialForm::lorentzian_sq) j["b"] = spec.b;
    return j;
}

PotentialSpec potential_from_json(const json& j) {
    if (!j.is_object() || !j.contains("form"))
        throw std::invalid_argument("potential JSON needs a \"form\" field");
    PotentialSpec spec;
    spec.form = form_from_name(j.at("form").get<std::string>());
    if (spec.form == PotentialForm::sum) {
        for (const auto& t : j.value("terms", json::array()))
            spec.terms.push_back(potential_from_json(t));
        return spec;
    }
    spec.a = j.at("a").get<double>();
    spec.b = j.value("b", 1.0);
    if (spec.form != PotentialForm::lorentzian_sq && !(spec.b > 0.0))
        throw std::invalid_argument("potential width b must be positive");
    return spec;
}

RunConfig parse_config(const json& doc) {
    RunConfig cfg;
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    if (doc.contains("scenario")) cfg.scenario = doc.at("scenario").get<int>();
    if (doc.contains("v0")) cfg.v0 = potential_from_json(doc.at("v0"));
    if (doc.contains("v1")) cfg.v1 = potential_from_json(doc.at("v1"));
    cfg.epsilon = doc.value("epsilon", cfg.epsilon);
    cfg.alpha = doc.value("alpha", cfg.alpha);
    if (doc.contains("gamma")) cfg.gamma = doc.at("gamma").get<double>();
    cfg.eigen_floor = doc.value("eigen_floor", cfg.eigen_floor);
    if (doc.contains("mu_grid")) {
        const auto& g = doc.at("mu_grid");
        cfg.mu_lo = g.value("lo", 0.0);
        cfg.mu_hi = g.value("hi", 0.0);
        cfg.mu_n = g.value("n", cfg.mu_n);
    }
    cfg.lambda_split = doc.value("lambda_split", cfg.lambda_split);
    if (doc.contains("tolerances")) {
        const auto& t = doc.at("tolerances");
        cfg.tolerances.rtol = t.value("rtol", cfg.tolerances.rtol);
        cfg.tolerances.atol = t.value("atol", cfg.tolerances.atol);
        cfg.tolerances.h_init = t.value("h_init", cfg.tolerances.h_init);
        cfg.tolerances.h_max = t.value("h_max", cfg.tolerances.h_max);
        cfg.tolerances.max_steps = t.value("max_steps", cfg.tolerances.max_steps);
    }
    cfg.delta_seed = doc.value("delta_seed", cfg.delta_seed);
    cfg.delta_seed_center = doc.value("delta_seed_center", cfg.delta_seed_center);
    cfg.paranoid = doc.value("paranoid", cfg.paranoid);
    if (doc.contains("oracle")) {
        const auto& o = doc.at("oracle");
        cfg.oracle_enabled = o.value("enabled", cfg.oracle_enabled);
        cfg.oracle_N = o.value("N", cfg.oracle_N);
        cfg.oracle_R = o.value("R", cfg.oracle_R);
    }
    cfg.parallel = doc.value("parallel", cfg.parallel);
    cfg.which = doc.value("which", cfg.which);
    cfg.out_dir = doc.value("out_dir", cfg.out_dir);

    if (!(cfg.epsilon > 0.0))
        throw std::invalid_argument("config: epsilon must be positive");
    if (!(cfg.eigen_floor > 0.0))
        throw std::invalid_argument("config: eigen_floor must be positive");
    if (cfg.which != "full" && cfg.which != "v0_only" && cfg.which != "v1_only")
        throw std::invalid_argument("config: which must be full, v0_only, or v1_only");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path + ": " + e.what());
    }
    return parse_config(doc);
}

namespace {

void render(const json& v, std::string& out) {
    switch (v.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                render(json(it.key()), out);
                out += ':';
                render(it.value(), out);
            }
            out += '}';
            return;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ',';
                render(v[i], out);
            }
            out += ']';
            return;
        }
        case json::value_t::string: {
            out += '"';
            for (char c : v.get_ref<const std::string&>()) {
                switch (c) {
                    case '"': out += "\\\""; break;
                    case '\\': out += "\\\\"; break;
                    case '\n': out += "\\n"; break;
                    case '\t': out += "\\t"; break;
                    case '\r': out += "\\r"; break;
                    default: out += c;
                }
            }
            out += '"';
            return;
        }
        case json::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            return;
        case json::value_t::number_integer:
        case json::value_t::number_unsigned:
            out += v.dump();
            return;
        case json::value_t::number_float: {
            out += csv_number(v.get<double>());
            return;
        }
        default:
            out += "null";
            return;
    }
}

}  // namespace

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);  // 17 significant digits, stable
    return buf;
}

std::string render_json(const json& doc) {
    std::string out;
    render(doc, out);
    out += '\n';
    return out;
}

void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << render_json(doc);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          std::optional<int> branch_k, double branch_offset) {
    const bool inner = traj.system.scale == Scale::inner;
    os << (inner ? "s,sigma,theta" : "t,tau,psi");
    os << ",event";
    if (branch_k) os << ",branch_k";
    os << '\n';
    // event rows are flagged 1 and carry the section radius
    std::size_t ev = 0;
    for (const auto& smp : traj.samples) {
        bool is_event = false;
        if (ev < traj.events.size() && smp.s == traj.events[ev].s &&
            smp.state.radius == traj.events[ev].state.radius) {
            is_event = true;
            ++ev;
        }
        os << csv_number(smp.s) << ',' << csv_number(smp.state.radius) << ','
           << csv_number(smp.state.angle + branch_offset) << ','
           << (is_event ? '1' : '0');
        if (branch_k) os << ',' << *branch_k;
        os << '\n';
    }
}

}  // namespace specscales
