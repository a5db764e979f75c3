#include "indmath/fvm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace indmath::fvm {

namespace {

struct Coeffs {
    double ax;            // advective face coefficient u*hy*hz
    double dy, dz;        // diffusive face coefficients K*A/h
    int si, sj, sk;       // source cell
};

Coeffs setup(const Grid3D& grid, const FvmParams& params) {
    Coeffs c;
    c.ax = params.u_speed * grid.hy() * grid.hz();
    c.dy = params.ky * grid.hx() * grid.hz() / grid.hy();
    c.dz = params.kz * grid.hx() * grid.hy() / grid.hz();
    auto cell = [](double pos, double lo, double h, int n) {
        int i = static_cast<int>(std::floor((pos - lo) / h));
        return std::clamp(i, 0, n - 1);
    };
    c.si = cell(params.source_x, grid.x_min, grid.hx(), grid.nx);
    c.sj = cell(params.source_y, grid.y_min, grid.hy(), grid.ny);
    c.sk = cell(params.source_z, grid.z_min, grid.hz(), grid.nz);
    return c;
}

}  // namespace

void validate(const Grid3D& grid) {
    if (grid.nx < 2 || grid.ny < 2 || grid.nz < 2)
        throw GridMismatch("grid needs at least 2 cells per axis");
    if (!(grid.x_max > grid.x_min) || !(grid.y_max > grid.y_min) ||
        !(grid.z_max > grid.z_min))
        throw GridMismatch("grid extents must be positive");
}

SolveResult fvm_steady_solve(const Grid3D& grid, const FvmParams& params) {
    validate(grid);
    if (!(params.u_speed > 0.0))
        throw NonPositiveWind("fvm requires positive wind speed");
    if (!(params.ky > 0.0) || !(params.kz > 0.0))
        throw Error(ErrorCode::InvalidArgument, "eddy diffusivities must be positive");
    if (params.source_x < grid.x_min || params.source_x > grid.x_max ||
        params.source_y < grid.y_min || params.source_y > grid.y_max ||
        params.source_z < grid.z_min || params.source_z > grid.z_max)
        throw Error(ErrorCode::InvalidArgument, "source must lie inside the grid");

    const Coeffs co = setup(grid, params);
    SolveResult result;
    result.source_i = co.si;
    result.source_j = co.sj;
    result.source_k = co.sk;
    result.field.c.assign(grid.cell_count(), 0.0);
    std::vector<double>& c = result.field.c;

    const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
    double update = std::numeric_limits<double>::infinity();
    int sweep = 0;
    while (sweep < params.max_sweeps) {
        ++sweep;
        double max_change = 0.0;
        double max_value = 0.0;
        // downstream-ordered Gauss-Seidel sweep
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny; ++j) {
                for (int k = 0; k < nz; ++k) {
                    double diag = co.ax;  // outflow through the east face
                    double rhs = 0.0;
                    if (i > 0) rhs += co.ax * c[grid.index(i - 1, j, k)];
                    // inflow face (i == 0) carries zero concentration
                    if (j > 0) {
                        diag += co.dy;
                        rhs += co.dy * c[grid.index(i, j - 1, k)];
                    }
                    if (j < ny - 1) {
                        diag += co.dy;
                        rhs += co.dy * c[grid.index(i, j + 1, k)];
                    }
                    if (k > 0) {
                        diag += co.dz;
                        rhs += co.dz * c[grid.index(i, j, k - 1)];
                    }
                    if (k < nz - 1) {
                        diag += co.dz;
                        rhs += co.dz * c[grid.index(i, j, k + 1)];
                    }
                    if (i == co.si && j == co.sj && k == co.sk) rhs += params.q;
                    const size_t idx = grid.index(i, j, k);
                    const double next = rhs / diag;
                    max_change = std::max(max_change, std::abs(next - c[idx]));
                    max_value = std::max(max_value, std::abs(next));
                    c[idx] = next;
                }
            }
        }
        update = max_value > 0.0 ? max_change / max_value : max_change;
        if (update < params.tol_update) {
            // the update test alone can fire while slow modes still carry a
            // flux imbalance, so the postcondition is checked explicitly
            result.flux_residual =
                flux_balance_residual(grid, params, result.field);
            if (result.flux_residual <= params.tol_flux) {
                result.converged = true;
                break;
            }
        }
    }
    result.sweeps = sweep;
    result.last_update = update;
    if (!result.converged)
        result.flux_residual = flux_balance_residual(grid, params, result.field);
    return result;
}

double flux_balance_residual(const Grid3D& grid, const FvmParams& params,
                             const Field3D& field) {
    validate(grid);
    if (field.c.size() != grid.cell_count())
        throw GridMismatch("field size does not match grid");
    const Coeffs co = setup(grid, params);
    const std::vector<double>& c = field.c;
    const int nx = grid.nx, ny = grid.ny, nz = grid.nz;
    double worst = 0.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            for (int k = 0; k < nz; ++k) {
                const double cp = c[grid.index(i, j, k)];
                double net = co.ax * cp;  // east face out (upwind value)
                double scale = co.ax * std::abs(cp);
                if (i > 0) {
                    const double f = co.ax * c[grid.index(i - 1, j, k)];
                    net -= f;
                    scale += std::abs(f);
                }
                auto diff_face = [&](int jj, int kk, double coeff) {
                    const double f = coeff * (c[grid.index(i, jj, kk)] - cp);
                    net -= f;
                    scale += std::abs(f);
                };
                if (j > 0) diff_face(j - 1, k, co.dy);
                if (j < ny - 1) diff_face(j + 1, k, co.dy);
                if (k > 0) diff_face(j, k - 1, co.dz);
                if (k < nz - 1) diff_face(j, k + 1, co.dz);
                double source = 0.0;
                if (i == co.si && j == co.sj && k == co.sk) source = params.q;
                scale += std::abs(source);
                if (scale == 0.0) continue;
                worst = std::max(worst, std::abs(net - source) / scale);
            }
        }
    }
    return worst;
}

double boundary_outflux(const Grid3D& grid, const FvmParams& params,
                        const Field3D& field) {
    validate(grid);
    if (field.c.size() != grid.cell_count())
        throw GridMismatch("field size does not match grid");
    const double area = grid.hy() * grid.hz();
    double flux = 0.0;
    for (int j = 0; j < grid.ny; ++j)
        for (int k = 0; k < grid.nz; ++k)
            flux += params.u_speed * field.c[grid.index(grid.nx - 1, j, k)] * area;
    return flux;
}

double matched_plume_value(const FvmParams& params, double x_rel, double y_rel,
                           double z_abs, double source_height) {
    if (x_rel <= 0.0) return 0.0;
    const double sy2 = 2.0 * params.ky * x_rel / params.u_speed;
    const double sz2 = 2.0 * params.kz * x_rel / params.u_speed;
    const double dz1 = z_abs - source_height;
    const double dz2 = z_abs + source_height;
    return params.q /
           (2.0 * std::numbers::pi * params.u_speed * std::sqrt(sy2 * sz2)) *
           std::exp(-y_rel * y_rel / (2.0 * sy2)) *
           (std::exp(-dz1 * dz1 / (2.0 * sz2)) +
            std::exp(-dz2 * dz2 / (2.0 * sz2)));
}

ErrorReport compare_to_analytic(const Grid3D& grid, const FvmParams& params,
                                const SolveResult& result,
                                int exclusion_cells) {
    validate(grid);
    if (result.field.c.size() != grid.cell_count())
        throw GridMismatch("field size does not match grid");

    const double x0 = grid.x_center(result.source_i);
    const double y0 = grid.y_center(result.source_j);
    const double z0 = grid.z_center(result.source_k) - grid.z_min;
    const double cut = x0 + exclusion_cells * grid.hx();

    double num = 0.0, den = 0.0, max_diff = 0.0, max_exact = 0.0;
    size_t count = 0;
    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.x_center(i);
        if (!(x > cut)) continue;
        for (int j = 0; j < grid.ny; ++j) {
            const double y = grid.y_center(j);
            for (int k = 0; k < grid.nz; ++k) {
                const double z = grid.z_center(k) - grid.z_min;
                const double exact =
                    matched_plume_value(params, x - x0, y - y0, z, z0);
                const double diff =
                    result.field.c[grid.index(i, j, k)] - exact;
                num += diff * diff;
                den += exact * exact;
                max_diff = std::max(max_diff, std::abs(diff));
                max_exact = std::max(max_exact, std::abs(exact));
                ++count;
            }
        }
    }
    ErrorReport report;
    report.cells_compared = count;
    if (den > 0.0) report.rel_l2 = std::sqrt(num / den);
    if (max_exact > 0.0) report.rel_max = max_diff / max_exact;
    return report;
}

}  // namespace indmath::fvm
