#pragma once

#include <string>
#include <vector>

#include "indmath/errors.hpp"

namespace indmath::plume {

// Elevated point source: ground position (x, y), release height h, emission
// rate q in g/s.
struct Source {
    double x = 0.0;
    double y = 0.0;
    double h = 0.0;
    double q = 0.0;
    std::string id;
};

// Dust-fall jar: ground position, collection area, and the measured
// cumulative deposition in mg/m^2.
struct Receptor {
    double x = 0.0;
    double y = 0.0;
    double collection_area = 1.0;
    double measured_deposition = 0.0;
    std::string id;
};

// One steady wind interval. direction_deg is where the wind blows TOWARD,
// in degrees counterclockwise from +x (east).
struct WindInterval {
    double duration = 0.0;
    double speed = 0.0;
    double direction_deg = 0.0;
    std::string start;
};

// Per-axis spread model: a fixed sigma or the power law a*x^b in downwind
// distance (a > 0, 0 < b < 1).
struct SigmaModel {
    enum class Kind { Constant, PowerLaw };
    Kind kind = Kind::PowerLaw;
    double value = 10.0;  // Constant
    double a = 0.08;      // PowerLaw
    double b = 0.9;

    static SigmaModel constant(double sigma) {
        return {Kind::Constant, sigma, 0.0, 0.0};
    }
    static SigmaModel power_law(double a, double b) {
        return {Kind::PowerLaw, 0.0, a, b};
    }
};

struct DispersionSpec {
    SigmaModel sigma_y = SigmaModel::power_law(0.08, 0.9);
    SigmaModel sigma_z = SigmaModel::power_law(0.06, 0.8);
};

struct Contaminant {
    std::string name = "particulate";
    double settling_velocity = 0.01;  // m/s
};

struct SigmaPair {
    double sigma_y;
    double sigma_z;
};

// Spread at a downwind distance; throws NonPositiveDownwind for x <= 0.
SigmaPair sigma_at(const DispersionSpec& spec, double x_downwind);

// Gaussian plume concentration in g/m^3 at a point given in the wind frame
// (wind along +x). Zero anywhere at or upwind of the source plane. The
// ground-image term doubles the ground-level value and makes dC/dz vanish
// at z = 0.
double concentration(const Source& source, double u_speed,
                     const DispersionSpec& spec, double x, double y, double z);

// Rotation into the wind frame: the output x axis points along the wind.
struct WindFramePoint {
    double x_downwind;
    double y_crosswind;
};
WindFramePoint rotate_to_wind_frame(double x, double y, double direction_deg);

// Sum of per-source concentrations (wind along +x).
double superpose_concentration(const std::vector<Source>& sources,
                               double u_speed, const DispersionSpec& spec,
                               double x, double y, double z);

// Cumulative deposition at a receptor over a wind record, in mg/m^2:
// sum over intervals of settling_velocity * ground concentration * duration.
double deposition(const std::vector<Source>& sources, const Receptor& receptor,
                  const std::vector<WindInterval>& wind,
                  const DispersionSpec& spec, const Contaminant& contaminant);

// Ground-level (or height z) concentration field on a regular grid in world
// coordinates for one wind interval. Rows are emitted y-major to match the
// x,y,value CSV layout.
struct ConcentrationField {
    int nx = 0;
    int ny = 0;
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> value;
};

ConcentrationField concentration_grid(const std::vector<Source>& sources,
                                      const WindInterval& wind,
                                      const DispersionSpec& spec, double x_min,
                                      double x_max, double y_min, double y_max,
                                      int nx, int ny, double z);

}  // namespace indmath::plume
