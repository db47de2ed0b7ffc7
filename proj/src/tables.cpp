#include "mbqs/tables.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mbqs/errors.hpp"

namespace mbqs {

namespace {

// fixed %.17g formatting so identical runs produce identical bytes
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("atomic_write: cannot open " + tmp.string());
        out << content;
        if (!out) throw FormatError("atomic_write: short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

nlohmann::json quench_spec_to_json(const QuenchSpec& spec, const RydbergParams* ryd) {
    nlohmann::json j;
    j["L"] = spec.L;
    j["g"] = spec.g;
    j["J_rad_per_us"] = spec.J;
    j["initial_state"] = to_string(spec.initial_state);
    j["times_us"] = spec.time_grid;
    if (ryd) {
        j["rydberg"] = {{"C6", ryd->C6},
                        {"a_um", ryd->a},
                        {"omega", ryd->omega},
                        {"delta", ryd->delta}};
    }
    return j;
}

QuenchSpec quench_spec_from_json(const nlohmann::json& j) {
    QuenchSpec spec;
    try {
        spec.L = j.at("L").get<int>();
        spec.g = j.at("g").get<double>();
        spec.J = j.at("J_rad_per_us").get<double>();
        spec.initial_state = initial_state_from_string(j.at("initial_state").get<std::string>());
        spec.time_grid = j.value("times_us", std::vector<double>{});
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("quench_spec_from_json: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::string reference_table_csv(const QuenchSpec& spec, const std::vector<ReferenceRow>& rows) {
    std::ostringstream out;
    out << "# mbqs reference table: L=" << spec.L << " g=" << fmt(spec.g)
        << " J=" << fmt(spec.J) << " rad/us state=" << to_string(spec.initial_state) << "\n";
    out << "# t_us [us], ell [sites], g2_connected, g2_disconnected, one_point\n";
    out << "t_us,ell,g2_connected,g2_disconnected,one_point\n";
    for (const auto& r : rows)
        out << fmt(r.t_us) << ',' << r.ell << ',' << fmt(r.g2_connected) << ','
            << fmt(r.g2_disconnected) << ',' << fmt(r.one_point) << "\n";
    return out.str();
}

nlohmann::json reference_table_json(const QuenchSpec& spec,
                                    const std::vector<ReferenceRow>& rows) {
    nlohmann::json j;
    j["spec"] = quench_spec_to_json(spec);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"t_us", r.t_us},
                       {"ell", r.ell},
                       {"g2_connected", r.g2_connected},
                       {"g2_disconnected", r.g2_disconnected},
                       {"one_point", r.one_point}});
    j["rows"] = arr;
    return j;
}

std::vector<ReferenceRow> reference_rows_from_json(const nlohmann::json& j, QuenchSpec* spec) {
    std::vector<ReferenceRow> rows;
    try {
        if (spec) *spec = quench_spec_from_json(j.at("spec"));
        for (const auto& r : j.at("rows")) {
            rows.push_back({r.at("t_us").get<double>(), r.at("ell").get<int>(),
                            r.at("g2_connected").get<double>(),
                            r.at("g2_disconnected").get<double>(),
                            r.at("one_point").get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("reference_rows_from_json: ") + e.what());
    }
    return rows;
}

std::string spacetime_csv(const QuenchSpec& spec, const std::vector<ReferenceRow>& rows) {
    std::ostringstream out;
    out << "# mbqs spacetime correlations: L=" << spec.L << " g=" << fmt(spec.g)
        << " J=" << fmt(spec.J) << " rad/us state=" << to_string(spec.initial_state) << "\n";
    out << "# Jt [dimensionless], ell [sites], g2 (connected)\n";
    out << "Jt,ell,g2\n";
    for (const auto& r : rows)
        out << fmt(spec.J * r.t_us) << ',' << r.ell << ',' << fmt(r.g2_connected) << "\n";
    return out.str();
}

std::string surge_table_csv(const std::vector<SurgeTableRow>& rows) {
    std::ostringstream out;
    out << "# mbqs surge times; Jt columns are dimensionless, widths at 75% height\n";
    out << "L,Jt_star_numeric,Jt_star_regression,Jt_star_analytic,peak_height,width75_Jt\n";
    for (const auto& r : rows)
        out << r.L << ',' << fmt(r.Jt_star_numeric) << ',' << fmt(r.Jt_star_regression) << ','
            << fmt(r.Jt_star_analytic) << ',' << fmt(r.peak_height) << ','
            << fmt(r.width75_Jt) << "\n";
    return out.str();
}

nlohmann::json surge_lookup_to_json(const SurgeLookup& lut) {
    nlohmann::json j;
    nlohmann::json exact = nlohmann::json::object();
    for (const auto& [L, v] : lut.exact_Jt) exact[std::to_string(L)] = v;
    j["exact_Jt"] = exact;
    j["regression"] = {{"slope", lut.fit.slope},
                       {"intercept", lut.fit.intercept},
                       {"r2", lut.fit.r2}};
    return j;
}

SurgeLookup surge_lookup_from_json(const nlohmann::json& j) {
    SurgeLookup lut;
    try {
        for (const auto& [key, v] : j.at("exact_Jt").items())
            lut.exact_Jt[std::stoi(key)] = v.get<double>();
        lut.fit.slope = j.at("regression").at("slope").get<double>();
        lut.fit.intercept = j.at("regression").at("intercept").get<double>();
        lut.fit.r2 = j.at("regression").value("r2", 0.0);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("surge_lookup_from_json: ") + e.what());
    }
    return lut;
}

std::string volumetric_csv(const std::vector<VolumetricCell>& cells) {
    std::ostringstream out;
    out << "# mbqs volumetric classification\n";
    out << "L,epsilon,status\n";
    for (const auto& c : cells)
        out << c.L << ',' << fmt(c.epsilon) << ',' << to_string(c.status) << "\n";
    return out.str();
}

nlohmann::json score_report_to_json(const std::vector<ScoreReport>& reports) {
    nlohmann::json j;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& rep : reports) {
        nlohmann::json r;
        r["epsilon"] = rep.epsilon;
        r["S"] = rep.S;
        r["S_is_lower_bound"] = rep.S_lower_bound;
        r["missing_L"] = rep.missing_L;
        r["excluded_L"] = rep.excluded_L;
        r["policy"] = to_string(rep.policy);
        r["mitigated"] = rep.mitigated;
        if (rep.mitigation_pfp_pfn)
            r["mitigation"] = {{"p_fp", rep.mitigation_pfp_pfn->first},
                               {"p_fn", rep.mitigation_pfp_pfn->second}};
        nlohmann::json p2 = nlohmann::json::object();
        for (const auto& [L, score] : rep.p2)
            p2[std::to_string(L)] = {{"value", score.value.value},
                                     {"stderr", score.value.stderr_},
                                     {"n_shots", score.value.n_shots},
                                     {"ell1_fallback", score.ell1_fallback}};
        r["P2"] = p2;
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& c : rep.cells)
            cells.push_back({{"L", c.L}, {"epsilon", c.epsilon},
                             {"status", to_string(c.status)}});
        r["cells"] = cells;
        arr.push_back(r);
    }
    j["reports"] = arr;
    return j;
}

} // namespace mbqs
