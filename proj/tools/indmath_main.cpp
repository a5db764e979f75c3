#include <CLI11.hpp>

#include <iostream>
#include <numbers>
#include <sstream>

#include "indmath/errors.hpp"
#include "indmath/fvm.hpp"
#include "indmath/imaging.hpp"
#include "indmath/inversion.hpp"
#include "indmath/pgm.hpp"
#include "indmath/plume.hpp"
#include "indmath/scenario.hpp"
#include "indmath/weldgeom.hpp"

namespace {

using indmath::io::format_value;

indmath::plume::SigmaModel parse_sigma(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "const") {
        const double v = std::stod(args);
        if (!(v > 0.0))
            throw indmath::Error(indmath::ErrorCode::Usage,
                                 "constant sigma must be positive: " + text);
        return indmath::plume::SigmaModel::constant(v);
    }
    if (kind == "pow") {
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw indmath::Error(indmath::ErrorCode::Usage,
                                 "power-law sigma needs 'pow:a,b': " + text);
        const double a = std::stod(args.substr(0, comma));
        const double b = std::stod(args.substr(comma + 1));
        if (!(a > 0.0) || !(b > 0.0) || !(b < 1.0))
            throw indmath::Error(indmath::ErrorCode::Usage,
                                 "power law needs a > 0 and 0 < b < 1: " + text);
        return indmath::plume::SigmaModel::power_law(a, b);
    }
    throw indmath::Error(indmath::ErrorCode::Usage,
                         "sigma spec must be 'const:v' or 'pow:a,b': " + text);
}

struct DispersionFlags {
    std::string sigma_y = "pow:0.08,0.9";
    std::string sigma_z = "pow:0.06,0.8";
    double settling = 0.01;
    std::string contaminant = "particulate";

    void attach(CLI::App* app) {
        app->add_option("--sigma-y", sigma_y,
                        "crosswind spread model, 'const:<m>' or 'pow:<a>,<b>' "
                        "(sigma = a * x_downwind^b, metres)")
            ->capture_default_str();
        app->add_option("--sigma-z", sigma_z,
                        "vertical spread model, same syntax as --sigma-y")
            ->capture_default_str();
        app->add_option("--settling", settling,
                        "settling velocity in m/s (deposition flux = "
                        "settling * ground concentration)")
            ->capture_default_str();
        app->add_option("--contaminant", contaminant, "contaminant name")
            ->capture_default_str();
    }
    indmath::plume::DispersionSpec spec() const {
        return {parse_sigma(sigma_y), parse_sigma(sigma_z)};
    }
    indmath::plume::Contaminant make_contaminant() const {
        return {contaminant, settling};
    }
};

int run_weld(double r1, double r2, double phi_deg, int samples,
             const std::string& out, double torch_radius, double probe_length,
             const std::string& violations_out) {
    const indmath::weld::PipeJoint joint{r1, r2,
                                         phi_deg * std::numbers::pi / 180.0};
    const auto [curve_a, curve_b] = indmath::weld::full_seam(joint, samples);

    std::ostringstream csv;
    csv << "theta2,branch,x,y,z\n";
    for (const auto* curve : {&curve_a, &curve_b}) {
        for (const auto& p : curve->points) {
            csv << format_value(p.theta2) << ',' << (p.branch > 0 ? '+' : '-')
                << ',' << format_value(p.x) << ',' << format_value(p.y) << ','
                << format_value(p.z) << '\n';
        }
    }
    indmath::io::write_text_atomic(out, csv.str());
    std::cerr << "weld: wrote " << 2 * samples << " seam points to " << out
              << "\n";

    if (!violations_out.empty()) {
        std::ostringstream vcsv;
        vcsv << "curve,theta2,min_distance\n";
        int curve_no = 1;
        size_t total = 0;
        for (const auto* curve : {&curve_a, &curve_b}) {
            const auto violations = indmath::weld::clearance_check(
                joint, *curve, torch_radius, probe_length);
            for (const auto& v : violations)
                vcsv << curve_no << ',' << format_value(v.theta2) << ','
                     << format_value(v.min_distance) << '\n';
            total += violations.size();
            ++curve_no;
        }
        indmath::io::write_text_atomic(violations_out, vcsv.str());
        std::cerr << "weld: " << total << " clearance violations written to "
                  << violations_out << "\n";
    }
    return 0;
}

int run_tripwire(const std::string& input, const indmath::imaging::DetectionParams& params,
                 const std::string& lines_out, const std::string& overlay_out) {
    const auto img = indmath::io::read_pgm(input);
    const auto [features, overlay] = indmath::imaging::detect_tripwires(img, params);

    std::ostringstream csv;
    csv << "rho,theta_rad,strength\n";
    for (const auto& f : features)
        csv << format_value(f.rho) << ',' << format_value(f.theta) << ','
            << format_value(f.strength) << '\n';
    indmath::io::write_text_atomic(lines_out, csv.str());
    if (!overlay_out.empty()) indmath::io::write_pgm(overlay, overlay_out);
    std::cerr << "tripwire: " << features.size() << " feature(s) detected\n";
    return 0;
}

int run_plume_forward(const std::string& sources_path, const std::string& wind_path,
                      const DispersionFlags& disp, const std::string& receptors_path,
                      const std::string& deposition_out, const std::string& grid_out,
                      double xmin, double xmax, double ymin, double ymax, int nx,
                      int ny, double z, int interval) {
    const auto sources = indmath::io::read_sources_csv(sources_path);
    const auto wind = indmath::io::read_wind_csv(wind_path);
    if (sources.empty()) throw indmath::EmptyScenario(sources_path + ": no sources");
    if (wind.empty()) throw indmath::EmptyScenario(wind_path + ": no wind rows");
    const auto spec = disp.spec();

    if (!deposition_out.empty()) {
        if (receptors_path.empty())
            throw indmath::Error(indmath::ErrorCode::Usage,
                                 "--deposition-out requires --receptors");
        const auto receptors = indmath::io::read_receptors_csv(receptors_path);
        std::ostringstream csv;
        csv << "id,x_m,y_m,deposition_mg_m2\n";
        for (const auto& r : receptors) {
            const double dep = indmath::plume::deposition(
                sources, r, wind, spec, disp.make_contaminant());
            csv << r.id << ',' << format_value(r.x) << ',' << format_value(r.y)
                << ',' << format_value(dep) << '\n';
        }
        indmath::io::write_text_atomic(deposition_out, csv.str());
        std::cerr << "plume forward: depositions written to " << deposition_out
                  << "\n";
    }

    if (!grid_out.empty()) {
        if (interval < 0 || interval >= static_cast<int>(wind.size()))
            throw indmath::Error(indmath::ErrorCode::Usage,
                                 "--interval out of range for wind record");
        const auto field = indmath::plume::concentration_grid(
            sources, wind[static_cast<size_t>(interval)], spec, xmin, xmax,
            ymin, ymax, nx, ny, z);
        std::ostringstream csv;
        csv << "x,y,value\n";
        for (size_t i = 0; i < field.value.size(); ++i)
            csv << format_value(field.x[i]) << ',' << format_value(field.y[i])
                << ',' << format_value(field.value[i]) << '\n';
        indmath::io::write_text_atomic(grid_out, csv.str());
        std::cerr << "plume forward: grid written to " << grid_out << "\n";
    }
    return 0;
}

int run_plume_invert(const std::string& sources_path,
                     const std::string& receptors_path,
                     const std::string& wind_path, const DispersionFlags& disp,
                     bool use_lsq, const std::string& out) {
    const auto scenario =
        indmath::io::ingest_scenario(sources_path, receptors_path, wind_path);
    std::cerr << "plume invert: " << scenario.sources.size() << " sources, "
              << scenario.receptors.size() << " receptors, "
              << scenario.wind.size() << " wind intervals\n";
    const auto spec = disp.spec();
    const auto contaminant = disp.make_contaminant();
    const auto matrix = indmath::inversion::build_design_matrix(
        scenario.sources, scenario.receptors, scenario.wind, spec, contaminant);

    Eigen::VectorXd d(static_cast<Eigen::Index>(scenario.receptors.size()));
    for (size_t i = 0; i < scenario.receptors.size(); ++i)
        d[static_cast<Eigen::Index>(i)] = scenario.receptors[i].measured_deposition;

    const auto estimate = use_lsq
                              ? indmath::inversion::solve_least_squares(matrix, d)
                              : indmath::inversion::solve_nnls(matrix, d);

    std::ostringstream csv;
    csv << "source_id,q_gps,stderr_placeholder,active_constraint\n";
    for (Eigen::Index j = 0; j < estimate.q.size(); ++j) {
        const bool active = !estimate.active.empty() &&
                            estimate.active[static_cast<size_t>(j)];
        csv << matrix.source_ids[static_cast<size_t>(j)] << ','
            << format_value(estimate.q[j]) << ",na," << (active ? 1 : 0)
            << '\n';
    }
    indmath::io::write_text_atomic(out, csv.str());

    std::cerr << "plume invert: solver=" << (use_lsq ? "lsq" : "nnls")
              << " residual_norm=" << format_value(estimate.residual_norm)
              << " rank=" << estimate.rank
              << " condition=" << format_value(estimate.condition) << "\n";
    if (estimate.rank_deficient)
        std::cerr << "plume invert: warning: design matrix is rank deficient; "
                     "minimum-norm solution returned\n";
    return 0;
}

int run_fvm_validate(const std::vector<int>& levels, double lx, double ly,
                     double lz, double u, double ky, double kz, double sx,
                     double sy, double sz, double q, int exclude_cells,
                     const std::string& report_out,
                     const std::string& field_out) {
    std::ostringstream report;
    std::vector<double> errors;
    for (size_t li = 0; li < levels.size(); ++li) {
        const int n = levels[li];
        indmath::fvm::Grid3D grid;
        grid.nx = grid.ny = grid.nz = n;
        grid.x_min = 0.0;
        grid.x_max = lx;
        grid.y_min = -ly / 2.0;
        grid.y_max = ly / 2.0;
        grid.z_min = 0.0;
        grid.z_max = lz;
        indmath::fvm::FvmParams params;
        params.u_speed = u;
        params.ky = ky;
        params.kz = kz;
        params.source_x = sx;
        params.source_y = sy;
        params.source_z = sz;
        params.q = q;
        const auto result = indmath::fvm::fvm_steady_solve(grid, params);
        // keep the physical comparison region fixed across levels
        const int exclusion = exclude_cells * n / levels.front();
        const auto err =
            indmath::fvm::compare_to_analytic(grid, params, result, exclusion);
        const double outflux =
            indmath::fvm::boundary_outflux(grid, params, result.field);
        errors.push_back(err.rel_l2);
        report << "level=" << n << " rel_l2=" << format_value(err.rel_l2)
               << " rel_max=" << format_value(err.rel_max)
               << " mass_balance_rel=" << format_value(std::abs(outflux - q) / q)
               << " flux_residual=" << format_value(result.flux_residual)
               << " sweeps=" << result.sweeps
               << " converged=" << (result.converged ? 1 : 0) << "\n";
        if (!result.converged)
            std::cerr << "fvm validate: warning: level " << n
                      << " hit the sweep cap before reaching tolerance\n";

        if (li + 1 == levels.size() && !field_out.empty()) {
            std::ostringstream csv;
            csv << "i,j,k,x,y,z,c\n";
            for (int i = 0; i < grid.nx; ++i)
                for (int j = 0; j < grid.ny; ++j)
                    for (int k = 0; k < grid.nz; ++k)
                        csv << i << ',' << j << ',' << k << ','
                            << format_value(grid.x_center(i)) << ','
                            << format_value(grid.y_center(j)) << ','
                            << format_value(grid.z_center(k)) << ','
                            << format_value(result.field.c[grid.index(i, j, k)])
                            << '\n';
            indmath::io::write_text_atomic(field_out, csv.str());
        }
    }
    for (size_t i = 0; i + 1 < errors.size(); ++i) {
        const double order = std::log2(errors[i] / errors[i + 1]);
        report << "order_" << levels[i] << "_" << levels[i + 1] << "="
               << format_value(order) << "\n";
    }
    indmath::io::write_text_atomic(report_out, report.str());
    std::cerr << "fvm validate: report written to " << report_out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "indmath: pipe-weld seam geometry, Radon trip-wire detection, and "
        "Gaussian plume source inversion tools"};
    app.require_subcommand(1);

    // weld
    auto* weld = app.add_subcommand(
        "weld", "compute the intersection seam of two joined pipes");
    double r1 = 1.0, r2 = 0.9, phi_deg = 90.0;
    int samples = 360;
    std::string seam_out = "seam.csv";
    double torch_radius = 0.0, probe_length = 0.5;
    std::string violations_out;
    weld->add_option("--r1", r1, "main pipe radius (length units)")->required();
    weld->add_option("--r2", r2, "branch pipe radius, must be <= r1")->required();
    weld->add_option("--phi-deg", phi_deg,
                     "joint angle in degrees, 0 < phi <= 90")->required();
    weld->add_option("--samples", samples, "theta2 samples per curve")
        ->capture_default_str();
    weld->add_option("--out", seam_out,
                     "seam CSV (theta2 in radians, branch sign, x,y,z)")
        ->capture_default_str();
    weld->add_option("--torch-radius", torch_radius,
                     "torch cylinder radius for the clearance check")
        ->capture_default_str();
    weld->add_option("--probe-length", probe_length,
                     "torch length sampled along the surface-normal bisector")
        ->capture_default_str();
    weld->add_option("--violations", violations_out,
                     "clearance violation CSV (curve,theta2,min_distance)");

    // tripwire
    auto* tripwire = app.add_subcommand(
        "tripwire", "detect linear features in a PGM image via the Radon transform");
    std::string trip_input, lines_out = "lines.csv", overlay_out;
    indmath::imaging::DetectionParams dp;
    double threshold_abs = -1.0;
    tripwire->add_option("--input", trip_input, "input image, binary PGM (P5)")
        ->required();
    tripwire->add_option("--quantile", dp.threshold_quantile,
                         "peak threshold as a quantile of sinogram values")
        ->capture_default_str();
    tripwire->add_option("--threshold", threshold_abs,
                         "absolute peak threshold (overrides --quantile)");
    tripwire->add_option("--edge-quantile", dp.edge_quantile,
                         "gradient-magnitude binarization quantile")
        ->capture_default_str();
    tripwire->add_option("--nms-rho", dp.nms_window_rho,
                         "non-maximum suppression window in rho bins (odd)")
        ->capture_default_str();
    tripwire->add_option("--nms-theta", dp.nms_window_theta,
                         "non-maximum suppression window in theta bins (odd)")
        ->capture_default_str();
    tripwire->add_option("--n-theta", dp.n_theta, "theta bins over [0, pi)")
        ->capture_default_str();
    tripwire->add_option("--n-rho", dp.n_rho,
                         "rho bins over [-D/2, D/2], 0 = image diagonal");
    bool no_laplacian = false;
    tripwire->add_flag("--no-laplacian", no_laplacian,
                       "skip the Laplacian pre-filter");
    tripwire->add_option("--lines", lines_out,
                         "detected line CSV (rho px, theta rad, strength)")
        ->capture_default_str();
    tripwire->add_option("--overlay", overlay_out,
                         "optional overlay PGM with detected lines burned in");

    // plume (forward + invert)
    auto* plume = app.add_subcommand("plume", "Gaussian plume dispersion engine");
    plume->require_subcommand(1);

    auto* forward = plume->add_subcommand(
        "forward", "depositions at receptors and/or a concentration grid");
    std::string fw_sources, fw_wind, fw_receptors, fw_dep_out, fw_grid_out;
    double fw_xmin = -500, fw_xmax = 500, fw_ymin = -500, fw_ymax = 500,
           fw_z = 0.0;
    int fw_nx = 101, fw_ny = 101, fw_interval = 0;
    DispersionFlags fw_disp;
    forward->add_option("--sources", fw_sources, "sources CSV (id,x_m,y_m,h_m,q_gps)")
        ->required();
    forward->add_option("--wind", fw_wind,
                        "wind CSV (start,duration_s,speed_mps,dir_deg_toward; "
                        "direction blown toward, CCW degrees from +x/east)")
        ->required();
    forward->add_option("--receptors", fw_receptors,
                        "receptors CSV (id,x_m,y_m,area_m2,deposition_mg_m2)");
    forward->add_option("--deposition-out", fw_dep_out,
                        "per-receptor cumulative deposition CSV (mg/m^2)");
    forward->add_option("--grid-out", fw_grid_out,
                        "concentration grid CSV (x,y,value in g/m^3)");
    forward->add_option("--xmin", fw_xmin, "grid west edge in m (world frame)")
        ->capture_default_str();
    forward->add_option("--xmax", fw_xmax, "grid east edge in m")
        ->capture_default_str();
    forward->add_option("--ymin", fw_ymin, "grid south edge in m")
        ->capture_default_str();
    forward->add_option("--ymax", fw_ymax, "grid north edge in m")
        ->capture_default_str();
    forward->add_option("--nx", fw_nx, "grid columns")->capture_default_str();
    forward->add_option("--ny", fw_ny, "grid rows")->capture_default_str();
    forward->add_option("--z", fw_z, "evaluation height in m")
        ->capture_default_str();
    forward->add_option("--interval", fw_interval,
                        "wind record row used for the grid (0-based)")
        ->capture_default_str();
    fw_disp.attach(forward);

    auto* invert = plume->add_subcommand(
        "invert", "estimate emission rates from receptor depositions");
    std::string inv_sources, inv_receptors, inv_wind, inv_out = "estimate.csv";
    bool inv_lsq = false, inv_nonneg = false;
    DispersionFlags inv_disp;
    invert->add_option("--sources", inv_sources, "sources CSV (q_gps column ignored)")
        ->required();
    invert->add_option("--receptors", inv_receptors,
                       "receptors CSV with measured deposition_mg_m2")
        ->required();
    invert->add_option("--wind", inv_wind, "wind CSV")->required();
    invert->add_option("--out", inv_out,
                       "estimate CSV (source_id,q_gps,stderr_placeholder,"
                       "active_constraint)")
        ->capture_default_str();
    invert->add_flag("--lsq", inv_lsq,
                     "plain least squares (rates may come out negative)");
    invert->add_flag("--nonneg", inv_nonneg,
                     "nonnegative least squares (the default)");
    inv_disp.attach(invert);

    // fvm
    auto* fvm = app.add_subcommand("fvm", "finite-volume validation oracle");
    fvm->require_subcommand(1);
    auto* validate = fvm->add_subcommand(
        "validate",
        "refinement study of the upwind solver against the matched plume");
    std::vector<int> levels{32, 64, 128};
    double fv_lx = 400, fv_ly = 200, fv_lz = 160, fv_u = 5, fv_ky = 5,
           fv_kz = 5, fv_sx = 25, fv_sy = 0, fv_sz = 40, fv_q = 1;
    int fv_exclude = 5;
    std::string fv_report = "fvm_report.txt", fv_field_out;
    validate->add_option("--levels", levels, "cube cell counts, e.g. 32 64 128")
        ->capture_default_str();
    validate->add_option("--extent-x", fv_lx, "domain length in m")
        ->capture_default_str();
    validate->add_option("--extent-y", fv_ly, "domain width in m (centered)")
        ->capture_default_str();
    validate->add_option("--extent-z", fv_lz, "domain height in m")
        ->capture_default_str();
    validate->add_option("--u", fv_u, "wind speed m/s (+x)")->capture_default_str();
    validate->add_option("--ky", fv_ky, "crosswind eddy diffusivity m^2/s")
        ->capture_default_str();
    validate->add_option("--kz", fv_kz, "vertical eddy diffusivity m^2/s")
        ->capture_default_str();
    validate->add_option("--source-x", fv_sx)->capture_default_str();
    validate->add_option("--source-y", fv_sy)->capture_default_str();
    validate->add_option("--source-z", fv_sz, "release height in m")
        ->capture_default_str();
    validate->add_option("--q", fv_q, "emission rate g/s")->capture_default_str();
    validate->add_option("--exclude-cells", fv_exclude,
                         "cells downwind of the source excluded at the "
                         "coarsest level (scaled with refinement)")
        ->capture_default_str();
    validate->add_option("--report", fv_report, "key=value error report path")
        ->capture_default_str();
    validate->add_option("--field-out", fv_field_out,
                         "finest-level field CSV (i,j,k,x,y,z,c)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*weld)
            return run_weld(r1, r2, phi_deg, samples, seam_out, torch_radius,
                            probe_length, violations_out);
        if (*tripwire) {
            if (threshold_abs >= 0.0) dp.threshold_abs = threshold_abs;
            dp.use_laplacian = !no_laplacian;
            return run_tripwire(trip_input, dp, lines_out, overlay_out);
        }
        if (*forward)
            return run_plume_forward(fw_sources, fw_wind, fw_disp, fw_receptors,
                                     fw_dep_out, fw_grid_out, fw_xmin, fw_xmax,
                                     fw_ymin, fw_ymax, fw_nx, fw_ny, fw_z,
                                     fw_interval);
        if (*invert) {
            if (inv_lsq && inv_nonneg)
                throw indmath::Error(indmath::ErrorCode::Usage,
                                     "--lsq and --nonneg are mutually exclusive");
            return run_plume_invert(inv_sources, inv_receptors, inv_wind,
                                    inv_disp, inv_lsq, inv_out);
        }
        if (*validate)
            return run_fvm_validate(levels, fv_lx, fv_ly, fv_lz, fv_u, fv_ky,
                                    fv_kz, fv_sx, fv_sy, fv_sz, fv_q,
                                    fv_exclude, fv_report, fv_field_out);
    } catch (const indmath::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return static_cast<int>(indmath::ErrorCode::Internal);
    }
    return 0;
}
