#pragma once

#include <string>
#include <vector>

#include "indmath/plume.hpp"

namespace indmath::io {

// Parsed emission scenario. Units are fixed by the CSV headers:
//   sources    id,x_m,y_m,h_m,q_gps
//   receptors  id,x_m,y_m,area_m2,deposition_mg_m2
//   wind       start,duration_s,speed_mps,dir_deg_toward
// dir_deg_toward is the direction the wind blows toward, degrees
// counterclockwise from +x (east).
struct Scenario {
    std::vector<plume::Source> sources;
    std::vector<plume::Receptor> receptors;
    std::vector<plume::WindInterval> wind;
    plume::DispersionSpec dispersion;
    plume::Contaminant contaminant;
    std::string source_path;
    std::string receptor_path;
    std::string wind_path;
    std::string ingested_at;  // ISO-8601 UTC parse time
};

std::vector<plume::Source> read_sources_csv(const std::string& path);
std::vector<plume::Receptor> read_receptors_csv(const std::string& path);
std::vector<plume::WindInterval> read_wind_csv(const std::string& path);

Scenario ingest_scenario(const std::string& source_path,
                         const std::string& receptor_path,
                         const std::string& wind_path);

// Atomic text write: temp file in the same directory, then rename.
void write_text_atomic(const std::string& path, const std::string& content);

// Fixed 12-significant-digit formatting used by every CSV emitter.
std::string format_value(double v);

}  // namespace indmath::io
