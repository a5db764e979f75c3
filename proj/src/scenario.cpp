#include "indmath/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace indmath::io {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string strip(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Reads a CSV with a mandatory exact header. Calls row_fn(line_number,
// cells) for every data row with the right cell count.
template <typename RowFn>
void read_csv(const std::string& path,
              const std::vector<std::string>& expected_header, RowFn row_fn) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open: " + path);

    std::string line;
    if (!std::getline(in, line))
        throw UnitHeaderMismatch(path + ": empty file, expected header row");
    const auto header = split_csv_row(strip(line));
    if (header.size() != expected_header.size())
        throw UnitHeaderMismatch(path + ": header has " +
                                 std::to_string(header.size()) +
                                 " columns, expected " +
                                 std::to_string(expected_header.size()));
    for (size_t i = 0; i < header.size(); ++i) {
        if (strip(header[i]) != expected_header[i])
            throw UnitHeaderMismatch(path + ": header column " +
                                     std::to_string(i + 1) + " is '" +
                                     strip(header[i]) + "', expected '" +
                                     expected_header[i] + "'");
    }

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = strip(line);
        if (trimmed.empty()) continue;
        auto cells = split_csv_row(trimmed);
        if (cells.size() != expected_header.size())
            throw ParseError(path, line_no, expected_header[std::min(
                                                cells.size(),
                                                expected_header.size() - 1)],
                             "row has " + std::to_string(cells.size()) +
                                 " cells, expected " +
                                 std::to_string(expected_header.size()));
        row_fn(line_no, cells);
    }
}

double parse_number(const std::string& path, int line, const std::string& field,
                    const std::string& cell) {
    const std::string s = strip(cell);
    if (s.empty()) throw ParseError(path, line, field, "empty numeric field");
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            throw ParseError(path, line, field, "trailing characters in '" + s + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(path, line, field, "not a number: '" + s + "'");
    }
}

}  // namespace

std::vector<plume::Source> read_sources_csv(const std::string& path) {
    std::vector<plume::Source> out;
    read_csv(path, {"id", "x_m", "y_m", "h_m", "q_gps"},
             [&](int line, const std::vector<std::string>& cells) {
                 plume::Source s;
                 s.id = strip(cells[0]);
                 if (s.id.empty()) throw ParseError(path, line, "id", "empty id");
                 s.x = parse_number(path, line, "x_m", cells[1]);
                 s.y = parse_number(path, line, "y_m", cells[2]);
                 s.h = parse_number(path, line, "h_m", cells[3]);
                 s.q = parse_number(path, line, "q_gps", cells[4]);
                 if (s.h < 0.0)
                     throw ParseError(path, line, "h_m", "height must be >= 0");
                 out.push_back(std::move(s));
             });
    return out;
}

std::vector<plume::Receptor> read_receptors_csv(const std::string& path) {
    std::vector<plume::Receptor> out;
    read_csv(path, {"id", "x_m", "y_m", "area_m2", "deposition_mg_m2"},
             [&](int line, const std::vector<std::string>& cells) {
                 plume::Receptor r;
                 r.id = strip(cells[0]);
                 if (r.id.empty()) throw ParseError(path, line, "id", "empty id");
                 r.x = parse_number(path, line, "x_m", cells[1]);
                 r.y = parse_number(path, line, "y_m", cells[2]);
                 r.collection_area = parse_number(path, line, "area_m2", cells[3]);
                 r.measured_deposition =
                     parse_number(path, line, "deposition_mg_m2", cells[4]);
                 if (!(r.collection_area > 0.0))
                     throw ParseError(path, line, "area_m2",
                                      "collection area must be > 0");
                 if (r.measured_deposition < 0.0)
                     throw ParseError(path, line, "deposition_mg_m2",
                                      "deposition must be >= 0");
                 out.push_back(std::move(r));
             });
    return out;
}

std::vector<plume::WindInterval> read_wind_csv(const std::string& path) {
    std::vector<plume::WindInterval> out;
    read_csv(path, {"start", "duration_s", "speed_mps", "dir_deg_toward"},
             [&](int line, const std::vector<std::string>& cells) {
                 plume::WindInterval w;
                 w.start = strip(cells[0]);
                 w.duration = parse_number(path, line, "duration_s", cells[1]);
                 w.speed = parse_number(path, line, "speed_mps", cells[2]);
                 w.direction_deg =
                     parse_number(path, line, "dir_deg_toward", cells[3]);
                 if (w.duration < 0.0)
                     throw ParseError(path, line, "duration_s",
                                      "duration must be >= 0");
                 if (!(w.speed > 0.0))
                     throw ParseError(path, line, "speed_mps",
                                      "wind speed must be > 0");
                 out.push_back(std::move(w));
             });
    return out;
}

Scenario ingest_scenario(const std::string& source_path,
                         const std::string& receptor_path,
                         const std::string& wind_path) {
    Scenario sc;
    sc.sources = read_sources_csv(source_path);
    sc.receptors = read_receptors_csv(receptor_path);
    sc.wind = read_wind_csv(wind_path);
    sc.source_path = source_path;
    sc.receptor_path = receptor_path;
    sc.wind_path = wind_path;
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%FT%TZ", std::gmtime(&now));
    sc.ingested_at = stamp;
    if (sc.sources.empty())
        throw EmptyScenario(source_path + ": no source rows");
    if (sc.receptors.empty())
        throw EmptyScenario(receptor_path + ": no receptor rows");
    if (sc.wind.empty()) throw EmptyScenario(wind_path + ": no wind rows");
    return sc;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFailure("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw IoFailure("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoFailure("cannot move output into place: " + path);
    }
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace indmath::io
