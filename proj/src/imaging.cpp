#include "indmath/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace indmath::imaging {

namespace {

int clampi(int v, int lo, int hi) { return std::min(std::max(v, lo), hi); }

void require_size(const GrayImage& img, int min_side) {
    if (img.width < min_side || img.height < min_side)
        throw ImageTooSmall("image must be at least " + std::to_string(min_side) +
                            "x" + std::to_string(min_side));
    if (img.pixels.size() != static_cast<size_t>(img.width) * img.height)
        throw ImageTooSmall("pixel buffer does not match image dimensions");
}

// Order-statistic quantile: value at index ceil(q*N) of the ascending sort,
// clamped to the last element. Strict comparison against this value keeps at
// most floor((1-q)*N) samples.
double quantile_threshold(std::vector<double> values, double q) {
    const size_t n = values.size();
    size_t idx = static_cast<size_t>(std::ceil(q * static_cast<double>(n)));
    if (idx >= n) idx = n - 1;
    std::nth_element(values.begin(), values.begin() + idx, values.end());
    return values[idx];
}

}  // namespace

double Sinogram::theta_at(int t) const {
    return std::numbers::pi * t / n_theta;
}

int default_n_rho(int width, int height) {
    int n = static_cast<int>(std::ceil(std::hypot(width, height)));
    if (n % 2 == 0) ++n;
    return n;
}

GrayImage laplacian_filter(const GrayImage& img) {
    require_size(img, 3);
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double c = img.at(x, y);
            const double l = img.at(clampi(x - 1, 0, img.width - 1), y);
            const double r = img.at(clampi(x + 1, 0, img.width - 1), y);
            const double u = img.at(x, clampi(y - 1, 0, img.height - 1));
            const double d = img.at(x, clampi(y + 1, 0, img.height - 1));
            out.at(x, y) = -4.0 * c + l + r + u + d;
        }
    }
    return out;
}

GrayImage edge_detect(const GrayImage& img, const DetectionParams& params) {
    require_size(img, 3);
    if (!(params.edge_quantile > 0.0 && params.edge_quantile < 1.0))
        throw Error(ErrorCode::InvalidArgument, "edge quantile must be in (0,1)");

    std::vector<double> mag(img.pixels.size());
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double gx = (img.at(clampi(x + 1, 0, img.width - 1), y) -
                               img.at(clampi(x - 1, 0, img.width - 1), y)) /
                              2.0;
            const double gy = (img.at(x, clampi(y + 1, 0, img.height - 1)) -
                               img.at(x, clampi(y - 1, 0, img.height - 1))) /
                              2.0;
            mag[static_cast<size_t>(y) * img.width + x] = std::hypot(gx, gy);
        }
    }
    const double threshold = quantile_threshold(mag, params.edge_quantile);
    GrayImage out(img.width, img.height);
    for (size_t i = 0; i < mag.size(); ++i)
        out.pixels[i] = mag[i] > threshold ? 1.0 : 0.0;
    return out;
}

Sinogram radon_transform(const GrayImage& img, int n_theta, int n_rho) {
    require_size(img, 1);
    if (n_theta < 1 || n_rho < 1)
        throw Error(ErrorCode::InvalidArgument,
                    "sinogram needs at least one theta and one rho bin");

    const double diag = std::hypot(img.width, img.height);
    Sinogram sino;
    sino.n_theta = n_theta;
    sino.n_rho = n_rho;
    sino.rho_min = n_rho == 1 ? 0.0 : -diag / 2.0;
    sino.rho_step = n_rho == 1 ? 1.0 : diag / (n_rho - 1);
    sino.values.assign(static_cast<size_t>(n_theta) * n_rho, 0.0);

    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;
    for (int t = 0; t < n_theta; ++t) {
        const double theta = sino.theta_at(t);
        const double ct = std::cos(theta);
        const double st = std::sin(theta);
        double* row = &sino.values[static_cast<size_t>(t) * n_rho];
        for (int y = 0; y < img.height; ++y) {
            const double ys = (y - cy) * st;
            for (int x = 0; x < img.width; ++x) {
                const double v = img.at(x, y);
                if (v == 0.0) continue;
                const double rho = (x - cx) * ct - ys;
                int bin = static_cast<int>(
                    std::lround((rho - sino.rho_min) / sino.rho_step));
                bin = clampi(bin, 0, n_rho - 1);
                row[bin] += v;
            }
        }
    }
    return sino;
}

std::vector<LineFeature> find_peaks(const Sinogram& sino,
                                    const DetectionParams& params) {
    if (sino.values.empty()) return {};
    double threshold;
    if (params.threshold_abs) {
        threshold = *params.threshold_abs;
    } else {
        if (!(params.threshold_quantile > 0.0 && params.threshold_quantile < 1.0))
            throw Error(ErrorCode::InvalidArgument,
                        "threshold quantile must be in (0,1)");
        threshold = quantile_threshold(sino.values, params.threshold_quantile);
    }
    if (params.nms_window_rho < 1 || params.nms_window_theta < 1 ||
        params.nms_window_rho % 2 == 0 || params.nms_window_theta % 2 == 0)
        throw Error(ErrorCode::InvalidArgument, "nms window sizes must be odd");

    const int hr = params.nms_window_rho / 2;
    const int ht = params.nms_window_theta / 2;
    std::vector<LineFeature> peaks;
    for (int t = 0; t < sino.n_theta; ++t) {
        for (int r = 0; r < sino.n_rho; ++r) {
            const double v = sino.at(t, r);
            if (!(v > threshold)) continue;
            bool best = true;
            for (int dt = -ht; dt <= ht && best; ++dt) {
                // toroidal wrap in theta only
                const int tt = ((t + dt) % sino.n_theta + sino.n_theta) %
                               sino.n_theta;
                for (int dr = -hr; dr <= hr; ++dr) {
                    if (dt == 0 && dr == 0) continue;
                    const int rr = r + dr;
                    if (rr < 0 || rr >= sino.n_rho) continue;
                    const double vv = sino.at(tt, rr);
                    if (vv > v ||
                        (vv == v &&
                         (static_cast<long>(tt) * sino.n_rho + rr <
                          static_cast<long>(t) * sino.n_rho + r))) {
                        best = false;
                        break;
                    }
                }
            }
            if (best) peaks.push_back({sino.rho_at(r), sino.theta_at(t), v});
        }
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const LineFeature& a, const LineFeature& b) {
                         return a.strength > b.strength;
                     });
    return peaks;
}

std::vector<PixelCoord> backproject_peak(const LineFeature& feature, int width,
                                         int height) {
    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    const double ct = std::cos(feature.theta);
    const double st = std::sin(feature.theta);
    std::vector<PixelCoord> out;
    if (std::abs(ct) >= std::abs(st)) {
        // closer to vertical: one pixel per row
        for (int y = 0; y < height; ++y) {
            const double x = (feature.rho + (y - cy) * st) / ct + cx;
            const int xi = static_cast<int>(std::lround(x));
            if (xi >= 0 && xi < width) out.push_back({xi, y});
        }
    } else {
        for (int x = 0; x < width; ++x) {
            const double y = ((x - cx) * ct - feature.rho) / st + cy;
            const int yi = static_cast<int>(std::lround(y));
            if (yi >= 0 && yi < height) out.push_back({x, yi});
        }
    }
    return out;
}

std::pair<std::vector<LineFeature>, GrayImage> detect_tripwires(
    const GrayImage& img, const DetectionParams& params) {
    const GrayImage filtered =
        params.use_laplacian ? laplacian_filter(img) : img;
    const GrayImage edges = edge_detect(filtered, params);
    const int n_rho =
        params.n_rho > 0 ? params.n_rho : default_n_rho(img.width, img.height);
    const Sinogram sino = radon_transform(edges, params.n_theta, n_rho);
    const std::vector<LineFeature> features = find_peaks(sino, params);

    GrayImage overlay = img;
    if (!features.empty()) {
        const double peak_value =
            *std::max_element(img.pixels.begin(), img.pixels.end());
        for (const LineFeature& f : features)
            for (const PixelCoord& px : backproject_peak(f, img.width, img.height))
                overlay.at(px.x, px.y) = peak_value;
    }
    return {features, overlay};
}

}  // namespace indmath::imaging
