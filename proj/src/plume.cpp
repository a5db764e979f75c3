#include "indmath/plume.hpp"

#include <cmath>
#include <numbers>

namespace indmath::plume {

SigmaPair sigma_at(const DispersionSpec& spec, double x_downwind) {
    if (!(x_downwind > 0.0))
        throw NonPositiveDownwind("sigma_at requires a positive downwind distance");
    auto eval = [x_downwind](const SigmaModel& m) {
        if (m.kind == SigmaModel::Kind::Constant) return m.value;
        return m.a * std::pow(x_downwind, m.b);
    };
    return {eval(spec.sigma_y), eval(spec.sigma_z)};
}

double concentration(const Source& source, double u_speed,
                     const DispersionSpec& spec, double x, double y,
                     double z) {
    if (!(u_speed > 0.0))
        throw NonPositiveWind("wind speed must be positive");
    const double xd = x - source.x;
    if (xd <= 0.0) return 0.0;
    const double yc = y - source.y;
    const auto [sy, sz] = sigma_at(spec, xd);
    const double cross = std::exp(-yc * yc / (2.0 * sy * sy));
    const double dz1 = z - source.h;
    const double dz2 = z + source.h;
    const double vert = std::exp(-dz1 * dz1 / (2.0 * sz * sz)) +
                        std::exp(-dz2 * dz2 / (2.0 * sz * sz));
    return source.q / (2.0 * std::numbers::pi * u_speed * sy * sz) * cross * vert;
}

WindFramePoint rotate_to_wind_frame(double x, double y, double direction_deg) {
    const double d = direction_deg * std::numbers::pi / 180.0;
    const double c = std::cos(d);
    const double s = std::sin(d);
    return {c * x + s * y, -s * x + c * y};
}

double superpose_concentration(const std::vector<Source>& sources,
                               double u_speed, const DispersionSpec& spec,
                               double x, double y, double z) {
    double total = 0.0;
    for (const Source& s : sources)
        total += concentration(s, u_speed, spec, x, y, z);
    return total;
}

double deposition(const std::vector<Source>& sources, const Receptor& receptor,
                  const std::vector<WindInterval>& wind,
                  const DispersionSpec& spec, const Contaminant& contaminant) {
    double total = 0.0;  // g/m^2
    for (const WindInterval& w : wind) {
        if (!(w.speed > 0.0))
            throw NonPositiveWind("wind interval speed must be positive");
        if (w.duration == 0.0) continue;
        double c_ground = 0.0;
        for (const Source& s : sources) {
            const auto rel =
                rotate_to_wind_frame(receptor.x - s.x, receptor.y - s.y,
                                     w.direction_deg);
            Source aligned = s;
            aligned.x = 0.0;
            aligned.y = 0.0;
            c_ground += concentration(aligned, w.speed, spec, rel.x_downwind,
                                      rel.y_crosswind, 0.0);
        }
        total += contaminant.settling_velocity * c_ground * w.duration;
    }
    return total * 1000.0;  // g/m^2 -> mg/m^2
}

ConcentrationField concentration_grid(const std::vector<Source>& sources,
                                      const WindInterval& wind,
                                      const DispersionSpec& spec, double x_min,
                                      double x_max, double y_min, double y_max,
                                      int nx, int ny, double z) {
    if (nx < 1 || ny < 1)
        throw Error(ErrorCode::InvalidArgument, "grid resolution must be positive");
    if (!(wind.speed > 0.0))
        throw NonPositiveWind("wind interval speed must be positive");

    ConcentrationField field;
    field.nx = nx;
    field.ny = ny;
    field.x_min = x_min;
    field.x_max = x_max;
    field.y_min = y_min;
    field.y_max = y_max;
    field.x.reserve(static_cast<size_t>(nx) * ny);
    field.y.reserve(static_cast<size_t>(nx) * ny);
    field.value.reserve(static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        const double y = ny == 1 ? y_min : y_min + (y_max - y_min) * j / (ny - 1);
        for (int i = 0; i < nx; ++i) {
            const double x =
                nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1);
            double c = 0.0;
            for (const Source& s : sources) {
                const auto rel = rotate_to_wind_frame(x - s.x, y - s.y,
                                                      wind.direction_deg);
                Source aligned = s;
                aligned.x = 0.0;
                aligned.y = 0.0;
                c += concentration(aligned, wind.speed, spec, rel.x_downwind,
                                   rel.y_crosswind, z);
            }
            field.x.push_back(x);
            field.y.push_back(y);
            field.value.push_back(c);
        }
    }
    return field;
}

}  // namespace indmath::plume
