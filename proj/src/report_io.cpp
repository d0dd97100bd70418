#include "jcdiss/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace jcdiss {

using nlohmann::ordered_json;

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

std::string trajectory_csv(const Trajectory<double>& traj) {
    std::string out = "t";
    for (const auto& name : traj.series_order) out += "," + name;
    out += "\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out += format_number(traj.times[k]);
        for (const auto& name : traj.series_order) out += "," + format_number(traj.series.at(name)[k]);
        out += "\n";
    }
    return out;
}

std::string surface_csv(const Surface& s) {
    std::string out;
    for (double d : s.offsets) out += "," + format_number(d);
    out += "\n";
    for (std::size_t i = 0; i < s.temperatures.size(); ++i) {
        out += format_number(s.temperatures[i]);
        for (double v : s.values[i]) out += "," + format_number(v);
        out += "\n";
    }
    return out;
}

std::string matrix_csv(const CMatrix<double>& m) {
    std::string out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out += ",";
            out += format_number(m(r, c).real()) + "," + format_number(m(r, c).imag());
        }
        out += "\n";
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "axis_value,metric,value\n";
    for (const auto& r : rows) out += format_number(r.axis_value) + "," + r.metric + "," + format_number(r.value) + "\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed for " + path);
}

ordered_json json_number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

ordered_json to_json(const SystemParams<double>& p) {
    return {{"omega0", p.omega0}, {"Omega", p.Omega}, {"n_max", p.n_max}, {"dimension", dimension(p.n_max)}};
}

ordered_json to_json(const BathModel& b) {
    ordered_json j;
    ordered_json s;
    s["kind"] = spectrum_kind(b.spectral);
    std::visit(
        [&](const auto& sp) {
            using T = std::decay_t<decltype(sp)>;
            if constexpr (std::is_same_v<T, FlatSpectrum>) {
                s["J0"] = sp.J0;
                s["cutoff"] = sp.cutoff;
            } else if constexpr (std::is_same_v<T, OhmicSpectrum>) {
                s["eta"] = sp.eta;
                s["omega_c"] = sp.omega_c;
            } else {
                s["strength"] = sp.strength;
                s["center"] = sp.center;
                s["width"] = sp.width;
            }
        },
        b.spectral);
    j["spectrum"] = s;
    j["temperature"] = b.temperature;
    if (const auto* pv = std::get_if<PrincipalValueLambShift>(&b.lamb_shift)) {
        j["lamb_shift"] = {{"policy", "principal_value"}, {"epsilon", pv->epsilon}, {"tolerance", pv->tolerance}};
    } else {
        j["lamb_shift"] = {{"policy", "zero"}};
    }
    return j;
}

ordered_json to_json(const ComparisonReport& r) {
    ordered_json sectors = ordered_json::array();
    for (const auto& s : r.sectors) {
        sectors.push_back({{"excitation_difference", s.excitation_difference},
                           {"max_abs_deviation", json_number(s.max_abs_deviation)}});
    }
    return {{"kind_a", to_string(r.kind_a)},
            {"kind_b", to_string(r.kind_b)},
            {"distance", json_number(r.distance)},
            {"tolerance", r.tolerance},
            {"coincident", r.coincident},
            {"sectors", sectors}};
}

ordered_json to_json(const RabiFit& f) {
    ordered_json j{{"frequency", json_number(f.frequency)},
                   {"decay_rate", json_number(f.decay_rate)},
                   {"amplitude", json_number(f.amplitude)},
                   {"phase", json_number(f.phase)},
                   {"a_cos", json_number(f.a_cos)},
                   {"a_sin", json_number(f.a_sin)},
                   {"baseline", json_number(f.baseline)},
                   {"offset", json_number(f.offset)},
                   {"rms_residual", json_number(f.rms_residual)},
                   {"iterations", f.iterations}};
    j["predicted_frequency"] = f.predicted_frequency ? json_number(*f.predicted_frequency) : ordered_json(nullptr);
    j["relative_error"] = f.relative_error ? json_number(*f.relative_error) : ordered_json(nullptr);
    return j;
}

ordered_json to_json(const RateSpreadReport& r) {
    ordered_json table = ordered_json::array();
    for (const auto& e : r.table) {
        table.push_back({{"label", name(e.label)},
                         {"bohr_frequency", e.bohr_frequency},
                         {"downward_rate", json_number(e.downward_rate)},
                         {"upward_rate", json_number(e.upward_rate)}});
    }
    return {{"downward_spread", json_number(r.downward_spread)},
            {"upward_spread", json_number(r.upward_spread)},
            {"band_low", r.band_low},
            {"band_high", r.band_high},
            {"band_edges_confirmed", r.band_edges_confirmed},
            {"rates", table}};
}

ordered_json to_json(const TimescaleCheck& c) {
    return {{"gamma_max", json_number(c.gamma_max)},
            {"strong_coupling_ratio", json_number(c.strong_coupling_ratio)},
            {"optical_ratio", json_number(c.optical_ratio)},
            {"threshold", c.threshold},
            {"strong_coupling_holds", c.strong_coupling_holds},
            {"optical_holds", c.optical_holds},
            {"secular_rwa_valid", c.secular_rwa_valid},
            {"quasi_rwa_valid", c.quasi_rwa_valid},
            {"phenomenological_valid", c.phenomenological_valid}};
}

ordered_json to_json(const KossakowskiReport<double>& r) {
    ordered_json j{{"min_eigenvalue", json_number(r.min_eigenvalue)},
                   {"residual", json_number(r.residual)},
                   {"hermiticity_defect", json_number(r.hermiticity_defect)},
                   {"tolerance", r.tolerance}};
    j["is_lindblad"] = r.is_lindblad ? ordered_json(*r.is_lindblad) : ordered_json(nullptr);
    return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace jcdiss
