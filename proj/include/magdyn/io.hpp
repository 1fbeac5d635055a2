#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "magdyn/perturb.hpp"
#include "magdyn/physical.hpp"
#include "magdyn/protocol.hpp"
#include "magdyn/strutt.hpp"
#include "magdyn/theta.hpp"
#include "magdyn/trajectory.hpp"

namespace magdyn {

/// Shortest round-trippable decimal form; identical input bits give
/// identical text, which is what keeps emitted files byte-stable.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) {
        for (int prec = 1; prec <= 16; ++prec) {
            char probe[40];
            std::snprintf(probe, sizeof probe, "%.*g", prec, v);
            std::sscanf(probe, "%lf", &back);
            if (back == v) return probe;
        }
    }
    return buf;
}

/// FNV-1a over a canonical string; used as the config fingerprint.
inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Metadata block every emitted file carries.
struct RunMeta {
    std::string version;
    std::string config_hash;
    double step = 1e-4;
    double eps_thr = 1e-6;
    double overflow_guard = 1e12;
    int workers = 1;
    std::uint64_t seed = 0;

    nlohmann::ordered_json json() const {
        return {{"version", version},  {"config_hash", config_hash},
                {"step", step},        {"eps_thr", eps_thr},
                {"overflow_guard", overflow_guard},
                {"workers", workers},  {"seed", seed}};
    }

    std::string csv_comment() const {
        std::string s = "# version=" + version + " config_hash=" + config_hash +
                        " step=" + fmt_double(step) + " eps_thr=" + fmt_double(eps_thr) +
                        " overflow_guard=" + fmt_double(overflow_guard) +
                        " workers=" + std::to_string(workers) +
                        " seed=" + std::to_string(seed) + "\n";
        return s;
    }
};

inline std::string trajectory_csv(const TrajectoryRecord& r, const RunMeta& meta) {
    std::string out = meta.csv_comment();
    out += "t,x,px,y,py,lz\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        out += fmt_double(r.t[i]);  out += ',';
        out += fmt_double(r.x[i]);  out += ',';
        out += fmt_double(r.px[i]); out += ',';
        out += fmt_double(r.y[i]);  out += ',';
        out += fmt_double(r.py[i]); out += ',';
        out += fmt_double(r.lz[i]); out += '\n';
    }
    return out;
}

inline nlohmann::ordered_json trajectory_json(const TrajectoryRecord& r,
                                              const RunMeta& meta) {
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["x"] = r.x;
    j["px"] = r.px;
    j["y"] = r.y;
    j["py"] = r.py;
    j["lz"] = r.lz;
    j["meta"] = {{"pulse", r.pulse_desc},
                 {"force", {{"kind", r.force_desc}, {"value", r.force}}},
                 {"tolerances", {{"step", r.step}}}};
    j["meta"].update(meta.json());
    return j;
}

inline std::string strutt_csv(const StruttMap& map, const RunMeta& meta) {
    std::string out = meta.csv_comment();
    out += "beta1,beta2,sigma,h11,h12,h21,h22,class\n";
    const ScanGrid& g = map.grid;
    for (int i = 0; i < g.n1; ++i) {
        const std::string b1 = fmt_double(g.beta1_at(i));
        for (int j = 0; j < g.n2; ++j) {
            const CellResult& c = map.at(i, j);
            out += b1; out += ',';
            out += fmt_double(g.beta2_at(j)); out += ',';
            out += fmt_double(c.sigma); out += ',';
            out += fmt_double(c.h11);   out += ',';
            out += fmt_double(c.h12);   out += ',';
            out += fmt_double(c.h21);   out += ',';
            out += fmt_double(c.h22);   out += ',';
            out += to_string(c.cls);    out += '\n';
        }
    }
    return out;
}

inline nlohmann::ordered_json squeeze_json(const std::vector<SqueezePoint>& pts,
                                           double lambda_target, const RunMeta& meta) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : pts)
        arr.push_back({{"beta1", p.beta1},
                       {"beta2", p.beta2},
                       {"lambda", p.lambda},
                       {"residual", p.residual}});
    return {{"lambda_target", lambda_target}, {"points", arr}, {"meta", meta.json()}};
}

inline nlohmann::ordered_json design_json(const ThetaDesign& d, const RunMeta& meta) {
    return {{"b", d.b},
            {"c", d.c},
            {"a", {d.a[0], d.a[1], d.a[2], d.a[3]}},
            {"interval", {-kHalfPi, kHalfPi}},
            {"meta", meta.json()}};
}

inline std::string pulse_samples_csv(const ExactPulse& p, int n, const RunMeta& meta) {
    std::string out = meta.csv_comment();
    out += "t,beta\n";
    for (int i = 0; i <= n; ++i) {
        const double t = p.t_start + (p.t_end - p.t_start) * i / n;
        out += fmt_double(t);
        out += ',';
        out += fmt_double(p.beta(t));
        out += '\n';
    }
    return out;
}

inline nlohmann::ordered_json validity_json(const ValidityReport& r) {
    nlohmann::ordered_json zeros = nlohmann::ordered_json::array();
    for (const auto& z : r.zeros)
        zeros.push_back({{"t", z.t}, {"slope", z.slope}, {"slope_defect", z.slope_defect}});
    return {{"zeros", zeros},
            {"sign_profile", to_string(r.sign)},
            {"max_abs_beta", r.max_abs_beta},
            {"min_beta", r.min_beta},
            {"max_beta", r.max_beta},
            {"symmetry_residual", r.symmetry_residual},
            {"endpoints", {r.endpoint_left, r.endpoint_right}},
            {"zeros_admissible", r.zeros_admissible}};
}

inline nlohmann::ordered_json mat4_json(const Mat4& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int i = 0; i < 4; ++i)
        rows.push_back({m.at(i, 0), m.at(i, 1), m.at(i, 2), m.at(i, 3)});
    return rows;
}

inline nlohmann::ordered_json protocol_json(const ProtocolResult& r, const RunMeta& meta) {
    nlohmann::ordered_json stages = nlohmann::ordered_json::array();
    for (const auto& m : r.stage_transfers)
        stages.push_back({{"h", {m.h.h11, m.h.h12, m.h.h21, m.h.h22}},
                          {"sigma", m.sigma},
                          {"t_span", m.t_span}});
    return {{"final_state", {r.final_state.x, r.final_state.px, r.final_state.y, r.final_state.py}},
            {"lambda_x", r.lambda_x},
            {"lambda_y", r.lambda_y},
            {"offdiag_residual", r.offdiag_residual},
            {"composed", mat4_json(r.composed)},
            {"stages", stages},
            {"t_start", r.t_start},
            {"t_end", r.t_end},
            {"meta", meta.json()}};
}

inline nlohmann::ordered_json drift_json(const DriftReport& d, const ForceSpec& f) {
    return {{"centre_start", {d.centre_start.xbar, d.centre_start.ybar}},
            {"centre_end", {d.centre_end.xbar, d.centre_end.ybar}},
            {"drift", {d.drift_x, d.drift_y}},
            {"transversality", d.transversality},
            {"transversal", d.transversal},
            {"sample_t", {d.sample_t_start, d.sample_t_end}},
            {"beta_at_samples", {d.beta_start, d.beta_end}},
            {"force", {{"kind", to_string(f.kind)}, {"amplitude", f.amplitude}, {"omega", f.omega_f}}}};
}

inline nlohmann::ordered_json scaling_json(const ScalingRow& r) {
    return {{"T_s", r.T},     {"q_cm", r.q},         {"p_gcms", r.p},
            {"v_cms", r.v},   {"B_max_gauss", r.B_max}, {"rad_ratio", r.rad_ratio},
            {"beta_max", r.beta_max}};
}

inline std::string scaling_table(const std::vector<ScalingRow>& rows) {
    std::string out;
    auto line = [&](const std::string& name, auto get) {
        out += name;
        for (const auto& r : rows) {
            char buf[32];
            std::snprintf(buf, sizeof buf, " %12.3g", get(r));
            out += buf;
        }
        out += '\n';
    };
    line("T [s]          ", [](const ScalingRow& r) { return r.T; });
    line("q [cm]         ", [](const ScalingRow& r) { return r.q; });
    line("p [g cm/s]     ", [](const ScalingRow& r) { return r.p; });
    line("v [cm/s]       ", [](const ScalingRow& r) { return r.v; });
    line("B_max [gauss]  ", [](const ScalingRow& r) { return r.B_max; });
    line("F_rad/F_osc    ", [](const ScalingRow& r) { return r.rad_ratio; });
    return out;
}

inline nlohmann::ordered_json corrections_json(const CorrectionSeries& s) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& t : s.terms)
        terms.push_back({{"n", t.n},
                         {"coefficient", t.coefficient.str()},
                         {"coefficient_value", t.coefficient.to_double()},
                         {"deriv_max", t.deriv_max},
                         {"magnitude", t.magnitude}});
    return {{"r_cm", s.r},
            {"T_s", s.T},
            {"terms", terms},
            {"next_term_magnitude", s.next_term_magnitude},
            {"dalembert_factor", s.dalembert_factor},
            {"recursion_ok", s.recursion_ok}};
}

} // namespace magdyn
