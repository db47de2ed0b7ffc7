#pragma once

#include <string>
#include <vector>

#include "mbqs/freefermion.hpp"
#include "mbqs/scoring.hpp"
#include "mbqs/surge.hpp"

#include <nlohmann/json_fwd.hpp>

namespace mbqs {

/// Write `content` to `path` atomically (temp file + rename).
void atomic_write(const std::string& path, const std::string& content);

/// QuenchSpec <-> JSON with the canonical field names
/// {L, g, J_rad_per_us, initial_state, times_us, rydberg?}.
nlohmann::json quench_spec_to_json(const QuenchSpec& spec,
                                   const RydbergParams* rydberg = nullptr);
QuenchSpec quench_spec_from_json(const nlohmann::json& j);

/// Reference table artifact (CSV with '#' unit header + JSON mirror).
std::string reference_table_csv(const QuenchSpec& spec, const std::vector<ReferenceRow>& rows);
nlohmann::json reference_table_json(const QuenchSpec& spec,
                                    const std::vector<ReferenceRow>& rows);
std::vector<ReferenceRow> reference_rows_from_json(const nlohmann::json& j, QuenchSpec* spec);

/// Spacetime table (columns Jt, ell, g2).
std::string spacetime_csv(const QuenchSpec& spec, const std::vector<ReferenceRow>& rows);

/// surge_table.csv columns: L, Jt_star_numeric, Jt_star_regression,
/// Jt_star_analytic, peak_height, width75_Jt.
struct SurgeTableRow {
    int L;
    double Jt_star_numeric;
    double Jt_star_regression;
    double Jt_star_analytic;
    double peak_height;
    double width75_Jt;
};
std::string surge_table_csv(const std::vector<SurgeTableRow>& rows);
nlohmann::json surge_lookup_to_json(const SurgeLookup& lut);
SurgeLookup surge_lookup_from_json(const nlohmann::json& j);

/// volumetric.csv columns: L, epsilon, status.
std::string volumetric_csv(const std::vector<VolumetricCell>& cells);

nlohmann::json score_report_to_json(const std::vector<ScoreReport>& reports);

} // namespace mbqs
