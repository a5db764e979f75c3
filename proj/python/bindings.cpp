#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "indmath/fvm.hpp"
#include "indmath/imaging.hpp"
#include "indmath/inversion.hpp"
#include "indmath/plume.hpp"
#include "indmath/weldgeom.hpp"

namespace py = pybind11;
using namespace indmath;

namespace {

imaging::GrayImage image_from_array(const py::array_t<double>& arr) {
    const auto buf = arr.request();
    if (buf.ndim != 2) throw py::value_error("image must be a 2-D array");
    imaging::GrayImage img(static_cast<int>(buf.shape[1]),
                           static_cast<int>(buf.shape[0]));
    const auto view = arr.unchecked<2>();
    for (py::ssize_t y = 0; y < buf.shape[0]; ++y)
        for (py::ssize_t x = 0; x < buf.shape[1]; ++x)
            img.at(static_cast<int>(x), static_cast<int>(y)) = view(y, x);
    return img;
}

py::array_t<double> image_to_array(const imaging::GrayImage& img) {
    py::array_t<double> arr({img.height, img.width});
    auto view = arr.mutable_unchecked<2>();
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) view(y, x) = img.at(x, y);
    return arr;
}

py::array_t<double> sinogram_to_array(const imaging::Sinogram& s) {
    py::array_t<double> arr({s.n_theta, s.n_rho});
    auto view = arr.mutable_unchecked<2>();
    for (int t = 0; t < s.n_theta; ++t)
        for (int r = 0; r < s.n_rho; ++r) view(t, r) = s.at(t, r);
    return arr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "pipe-weld seam geometry, Radon trip-wire detection, Gaussian "
              "plume dispersion and source inversion";

    py::register_exception<Error>(m, "IndmathError");

    // ---- weld ----
    py::class_<weld::PipeJoint>(m, "PipeJoint")
        .def(py::init<double, double, double>(), py::arg("r1"), py::arg("r2"),
             py::arg("phi"))
        .def_readwrite("r1", &weld::PipeJoint::r1)
        .def_readwrite("r2", &weld::PipeJoint::r2)
        .def_readwrite("phi", &weld::PipeJoint::phi);

    py::class_<weld::CurvePoint>(m, "CurvePoint")
        .def_readonly("x", &weld::CurvePoint::x)
        .def_readonly("y", &weld::CurvePoint::y)
        .def_readonly("z", &weld::CurvePoint::z)
        .def_readonly("theta2", &weld::CurvePoint::theta2)
        .def_readonly("branch", &weld::CurvePoint::branch);

    m.def("intersection_point", &weld::intersection_point, py::arg("joint"),
          py::arg("theta2"), py::arg("branch"),
          "Closed-form seam point for one branch at one theta2.");

    m.def(
        "full_seam",
        [](const weld::PipeJoint& joint, int n_samples) {
            const auto [a, b] = weld::full_seam(joint, n_samples);
            auto pack = [](const weld::WeldCurve& c) {
                py::array_t<double> arr({static_cast<py::ssize_t>(c.points.size()),
                                         static_cast<py::ssize_t>(5)});
                auto view = arr.mutable_unchecked<2>();
                for (size_t i = 0; i < c.points.size(); ++i) {
                    view(i, 0) = c.points[i].theta2;
                    view(i, 1) = c.points[i].branch;
                    view(i, 2) = c.points[i].x;
                    view(i, 3) = c.points[i].y;
                    view(i, 4) = c.points[i].z;
                }
                return arr;
            };
            return py::make_tuple(pack(a), pack(b));
        },
        py::arg("joint"), py::arg("n_samples"),
        "Both seam curves as (n, 5) arrays of theta2, branch, x, y, z.");

    m.def(
        "clearance_check",
        [](const weld::PipeJoint& joint, int n_samples, double torch_radius,
           double probe_length) {
            const auto [a, b] = weld::full_seam(joint, n_samples);
            std::vector<std::pair<double, double>> out;
            for (const auto* curve : {&a, &b})
                for (const auto& v : weld::clearance_check(joint, *curve,
                                                           torch_radius,
                                                           probe_length))
                    out.emplace_back(v.theta2, v.min_distance);
            return out;
        },
        py::arg("joint"), py::arg("n_samples"), py::arg("torch_radius"),
        py::arg("probe_length"),
        "Torch clearance violations on both curves as (theta2, min_distance).");

    // ---- imaging ----
    py::class_<imaging::DetectionParams>(m, "DetectionParams")
        .def(py::init<>())
        .def_readwrite("threshold_abs", &imaging::DetectionParams::threshold_abs)
        .def_readwrite("threshold_quantile",
                       &imaging::DetectionParams::threshold_quantile)
        .def_readwrite("nms_window_rho", &imaging::DetectionParams::nms_window_rho)
        .def_readwrite("nms_window_theta",
                       &imaging::DetectionParams::nms_window_theta)
        .def_readwrite("use_laplacian", &imaging::DetectionParams::use_laplacian)
        .def_readwrite("edge_quantile", &imaging::DetectionParams::edge_quantile)
        .def_readwrite("n_theta", &imaging::DetectionParams::n_theta)
        .def_readwrite("n_rho", &imaging::DetectionParams::n_rho);

    py::class_<imaging::LineFeature>(m, "LineFeature")
        .def_readonly("rho", &imaging::LineFeature::rho)
        .def_readonly("theta", &imaging::LineFeature::theta)
        .def_readonly("strength", &imaging::LineFeature::strength);

    m.def(
        "laplacian_filter",
        [](const py::array_t<double>& image) {
            return image_to_array(imaging::laplacian_filter(image_from_array(image)));
        },
        py::arg("image"));

    m.def(
        "edge_detect",
        [](const py::array_t<double>& image, const imaging::DetectionParams& p) {
            return image_to_array(imaging::edge_detect(image_from_array(image), p));
        },
        py::arg("image"), py::arg("params") = imaging::DetectionParams{});

    m.def(
        "radon_transform",
        [](const py::array_t<double>& image, int n_theta, int n_rho) {
            const auto img = image_from_array(image);
            if (n_rho <= 0) n_rho = imaging::default_n_rho(img.width, img.height);
            const auto sino = imaging::radon_transform(img, n_theta, n_rho);
            std::vector<double> thetas(sino.n_theta), rhos(sino.n_rho);
            for (int t = 0; t < sino.n_theta; ++t) thetas[t] = sino.theta_at(t);
            for (int r = 0; r < sino.n_rho; ++r) rhos[r] = sino.rho_at(r);
            return py::make_tuple(sinogram_to_array(sino), thetas, rhos);
        },
        py::arg("image"), py::arg("n_theta") = 180, py::arg("n_rho") = 0,
        "Sinogram (n_theta, n_rho) plus the theta and rho grids.");

    m.def(
        "detect_tripwires",
        [](const py::array_t<double>& image, const imaging::DetectionParams& p) {
            const auto [features, overlay] =
                imaging::detect_tripwires(image_from_array(image), p);
            return py::make_tuple(features, image_to_array(overlay));
        },
        py::arg("image"), py::arg("params") = imaging::DetectionParams{},
        "Detected line features and the overlay image.");

    m.def(
        "backproject_peak",
        [](double rho, double theta, int width, int height) {
            std::vector<std::pair<int, int>> out;
            for (const auto& p :
                 imaging::backproject_peak({rho, theta, 1.0}, width, height))
                out.emplace_back(p.x, p.y);
            return out;
        },
        py::arg("rho"), py::arg("theta"), py::arg("width"), py::arg("height"));

    // ---- plume ----
    py::class_<plume::Source>(m, "Source")
        .def(py::init([](double x, double y, double h, double q, std::string id) {
                 return plume::Source{x, y, h, q, std::move(id)};
             }),
             py::arg("x"), py::arg("y"), py::arg("h"), py::arg("q"),
             py::arg("id") = "")
        .def_readwrite("x", &plume::Source::x)
        .def_readwrite("y", &plume::Source::y)
        .def_readwrite("h", &plume::Source::h)
        .def_readwrite("q", &plume::Source::q)
        .def_readwrite("id", &plume::Source::id);

    py::class_<plume::Receptor>(m, "Receptor")
        .def(py::init([](double x, double y, double area, double dep,
                         std::string id) {
                 return plume::Receptor{x, y, area, dep, std::move(id)};
             }),
             py::arg("x"), py::arg("y"), py::arg("collection_area") = 1.0,
             py::arg("measured_deposition") = 0.0, py::arg("id") = "")
        .def_readwrite("x", &plume::Receptor::x)
        .def_readwrite("y", &plume::Receptor::y)
        .def_readwrite("collection_area", &plume::Receptor::collection_area)
        .def_readwrite("measured_deposition", &plume::Receptor::measured_deposition)
        .def_readwrite("id", &plume::Receptor::id);

    py::class_<plume::WindInterval>(m, "WindInterval")
        .def(py::init([](double duration, double speed, double direction,
                         std::string start) {
                 return plume::WindInterval{duration, speed, direction,
                                            std::move(start)};
             }),
             py::arg("duration"), py::arg("speed"), py::arg("direction_deg"),
             py::arg("start") = "")
        .def_readwrite("duration", &plume::WindInterval::duration)
        .def_readwrite("speed", &plume::WindInterval::speed)
        .def_readwrite("direction_deg", &plume::WindInterval::direction_deg);

    py::class_<plume::SigmaModel>(m, "SigmaModel")
        .def_static("constant", &plume::SigmaModel::constant, py::arg("sigma"))
        .def_static("power_law", &plume::SigmaModel::power_law, py::arg("a"),
                    py::arg("b"));

    py::class_<plume::DispersionSpec>(m, "DispersionSpec")
        .def(py::init<>())
        .def(py::init([](const plume::SigmaModel& sy, const plume::SigmaModel& sz) {
                 return plume::DispersionSpec{sy, sz};
             }),
             py::arg("sigma_y"), py::arg("sigma_z"))
        .def_readwrite("sigma_y", &plume::DispersionSpec::sigma_y)
        .def_readwrite("sigma_z", &plume::DispersionSpec::sigma_z);

    py::class_<plume::Contaminant>(m, "Contaminant")
        .def(py::init([](std::string name, double settling) {
                 return plume::Contaminant{std::move(name), settling};
             }),
             py::arg("name") = "particulate", py::arg("settling_velocity") = 0.01)
        .def_readwrite("name", &plume::Contaminant::name)
        .def_readwrite("settling_velocity", &plume::Contaminant::settling_velocity);

    m.def(
        "sigma_at",
        [](const plume::DispersionSpec& spec, double x) {
            const auto s = plume::sigma_at(spec, x);
            return py::make_tuple(s.sigma_y, s.sigma_z);
        },
        py::arg("spec"), py::arg("x_downwind"));

    m.def("concentration", &plume::concentration, py::arg("source"),
          py::arg("u_speed"), py::arg("spec"), py::arg("x"), py::arg("y"),
          py::arg("z"),
          "Plume concentration (g/m^3) at a wind-frame point; wind along +x.");

    m.def(
        "rotate_to_wind_frame",
        [](double x, double y, double direction_deg) {
            const auto p = plume::rotate_to_wind_frame(x, y, direction_deg);
            return py::make_tuple(p.x_downwind, p.y_crosswind);
        },
        py::arg("x"), py::arg("y"), py::arg("direction_deg"));

    m.def("superpose_concentration", &plume::superpose_concentration,
          py::arg("sources"), py::arg("u_speed"), py::arg("spec"), py::arg("x"),
          py::arg("y"), py::arg("z"));

    m.def("deposition", &plume::deposition, py::arg("sources"),
          py::arg("receptor"), py::arg("wind"), py::arg("spec"),
          py::arg("contaminant"),
          "Cumulative deposition (mg/m^2) over a wind record.");

    m.def(
        "concentration_grid",
        [](const std::vector<plume::Source>& sources,
           const plume::WindInterval& wind, const plume::DispersionSpec& spec,
           double x_min, double x_max, double y_min, double y_max, int nx,
           int ny, double z) {
            const auto f = plume::concentration_grid(sources, wind, spec, x_min,
                                                     x_max, y_min, y_max, nx,
                                                     ny, z);
            py::array_t<double> arr({ny, nx});
            auto view = arr.mutable_unchecked<2>();
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i)
                    view(j, i) = f.value[static_cast<size_t>(j) * nx + i];
            return arr;
        },
        py::arg("sources"), py::arg("wind"), py::arg("spec"), py::arg("x_min"),
        py::arg("x_max"), py::arg("y_min"), py::arg("y_max"), py::arg("nx"),
        py::arg("ny"), py::arg("z") = 0.0);

    // ---- inversion ----
    py::class_<inversion::DesignMatrix>(m, "DesignMatrix")
        .def(py::init([](const Eigen::MatrixXd& values) {
                 inversion::DesignMatrix dm;
                 dm.values = values;
                 for (Eigen::Index i = 0; i < values.rows(); ++i)
                     dm.receptor_ids.push_back("r" + std::to_string(i));
                 for (Eigen::Index j = 0; j < values.cols(); ++j)
                     dm.source_ids.push_back("s" + std::to_string(j));
                 return dm;
             }),
             py::arg("values"))
        .def_readonly("values", &inversion::DesignMatrix::values)
        .def_readonly("receptor_ids", &inversion::DesignMatrix::receptor_ids)
        .def_readonly("source_ids", &inversion::DesignMatrix::source_ids);

    py::class_<inversion::EmissionEstimate>(m, "EmissionEstimate")
        .def_readonly("q", &inversion::EmissionEstimate::q)
        .def_readonly("residual_norm", &inversion::EmissionEstimate::residual_norm)
        .def_readonly("rank", &inversion::EmissionEstimate::rank)
        .def_readonly("condition", &inversion::EmissionEstimate::condition)
        .def_readonly("rank_deficient",
                      &inversion::EmissionEstimate::rank_deficient)
        .def_readonly("active", &inversion::EmissionEstimate::active);

    m.def("build_design_matrix", &inversion::build_design_matrix,
          py::arg("sources"), py::arg("receptors"), py::arg("wind"),
          py::arg("spec"), py::arg("contaminant"));
    m.def("solve_least_squares", &inversion::solve_least_squares,
          py::arg("matrix"), py::arg("d"));
    m.def("solve_nnls", &inversion::solve_nnls, py::arg("matrix"), py::arg("d"));

    // ---- fvm ----
    py::class_<fvm::Grid3D>(m, "Grid3D")
        .def(py::init<>())
        .def_readwrite("nx", &fvm::Grid3D::nx)
        .def_readwrite("ny", &fvm::Grid3D::ny)
        .def_readwrite("nz", &fvm::Grid3D::nz)
        .def_readwrite("x_min", &fvm::Grid3D::x_min)
        .def_readwrite("x_max", &fvm::Grid3D::x_max)
        .def_readwrite("y_min", &fvm::Grid3D::y_min)
        .def_readwrite("y_max", &fvm::Grid3D::y_max)
        .def_readwrite("z_min", &fvm::Grid3D::z_min)
        .def_readwrite("z_max", &fvm::Grid3D::z_max);

    py::class_<fvm::FvmParams>(m, "FvmParams")
        .def(py::init<>())
        .def_readwrite("u_speed", &fvm::FvmParams::u_speed)
        .def_readwrite("ky", &fvm::FvmParams::ky)
        .def_readwrite("kz", &fvm::FvmParams::kz)
        .def_readwrite("source_x", &fvm::FvmParams::source_x)
        .def_readwrite("source_y", &fvm::FvmParams::source_y)
        .def_readwrite("source_z", &fvm::FvmParams::source_z)
        .def_readwrite("q", &fvm::FvmParams::q)
        .def_readwrite("tol_update", &fvm::FvmParams::tol_update)
        .def_readwrite("max_sweeps", &fvm::FvmParams::max_sweeps);

    py::class_<fvm::SolveResult>(m, "SolveResult")
        .def_readonly("converged", &fvm::SolveResult::converged)
        .def_readonly("sweeps", &fvm::SolveResult::sweeps)
        .def_readonly("flux_residual", &fvm::SolveResult::flux_residual)
        .def_readonly("source_i", &fvm::SolveResult::source_i)
        .def_readonly("source_j", &fvm::SolveResult::source_j)
        .def_readonly("source_k", &fvm::SolveResult::source_k);

    m.def(
        "fvm_steady_solve",
        [](const fvm::Grid3D& grid, const fvm::FvmParams& params) {
            auto result = fvm::fvm_steady_solve(grid, params);
            py::array_t<double> arr({grid.nx, grid.ny, grid.nz});
            auto view = arr.mutable_unchecked<3>();
            for (int i = 0; i < grid.nx; ++i)
                for (int j = 0; j < grid.ny; ++j)
                    for (int k = 0; k < grid.nz; ++k)
                        view(i, j, k) = result.field.c[grid.index(i, j, k)];
            return py::make_tuple(arr, result);
        },
        py::arg("grid"), py::arg("params"),
        "Steady field as an (nx, ny, nz) array plus the solve diagnostics.");

    m.def(
        "compare_to_analytic",
        [](const fvm::Grid3D& grid, const fvm::FvmParams& params,
           const py::array_t<double>& field, int source_i, int source_j,
           int source_k, int exclusion_cells) {
            fvm::SolveResult result;
            result.source_i = source_i;
            result.source_j = source_j;
            result.source_k = source_k;
            result.field.c.assign(grid.cell_count(), 0.0);
            const auto view = field.unchecked<3>();
            for (int i = 0; i < grid.nx; ++i)
                for (int j = 0; j < grid.ny; ++j)
                    for (int k = 0; k < grid.nz; ++k)
                        result.field.c[grid.index(i, j, k)] = view(i, j, k);
            const auto report =
                fvm::compare_to_analytic(grid, params, result, exclusion_cells);
            return py::make_tuple(report.rel_l2, report.rel_max,
                                  report.cells_compared);
        },
        py::arg("grid"), py::arg("params"), py::arg("field"),
        py::arg("source_i"), py::arg("source_j"), py::arg("source_k"),
        py::arg("exclusion_cells") = 5);

    m.def("boundary_outflux",
          [](const fvm::Grid3D& grid, const fvm::FvmParams& params,
             const py::array_t<double>& field) {
              fvm::Field3D f;
              f.c.assign(grid.cell_count(), 0.0);
              const auto view = field.unchecked<3>();
              for (int i = 0; i < grid.nx; ++i)
                  for (int j = 0; j < grid.ny; ++j)
                      for (int k = 0; k < grid.nz; ++k)
                          f.c[grid.index(i, j, k)] = view(i, j, k);
              return fvm::boundary_outflux(grid, params, f);
          });
}
