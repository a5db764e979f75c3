#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "indmath/errors.hpp"

namespace indmath::imaging {

// Row-major grayscale raster with real intensities.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0)
        : width(w), height(h), pixels(static_cast<size_t>(w) * h, fill) {}

    double& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const {
        return pixels[static_cast<size_t>(y) * width + x];
    }
};

// Discrete Radon transform. theta bins cover [0, pi) uniformly; rho bins are
// node-centered on [-D/2, D/2] with D the image diagonal in pixels and the
// origin at the image center. values is row-major with one row per theta.
struct Sinogram {
    int n_theta = 0;
    int n_rho = 0;
    double rho_min = 0.0;
    double rho_step = 0.0;
    std::vector<double> values;

    double theta_at(int t) const;
    double rho_at(int r) const { return rho_min + r * rho_step; }
    double& at(int t, int r) {
        return values[static_cast<size_t>(t) * n_rho + r];
    }
    double at(int t, int r) const {
        return values[static_cast<size_t>(t) * n_rho + r];
    }
};

struct LineFeature {
    double rho;
    double theta;
    double strength;
};

struct PixelCoord {
    int x;
    int y;
};

// Knobs for the detection pipeline. The peak threshold is either absolute
// (threshold_abs set) or the given quantile of sinogram values. nms window
// sizes are odd bin counts; the theta axis wraps toroidally during
// suppression, the rho axis does not. n_rho = 0 selects the default of one
// bin per pixel of image diagonal (rounded up to odd so rho = 0 is a bin
// center).
struct DetectionParams {
    std::optional<double> threshold_abs;
    double threshold_quantile = 0.999;
    int nms_window_rho = 5;
    int nms_window_theta = 5;
    bool use_laplacian = true;
    double edge_quantile = 0.9;
    int n_theta = 180;
    int n_rho = 0;
};

// 5-point Laplacian stencil (-4 center + 4-neighbors) with replicated edges.
GrayImage laplacian_filter(const GrayImage& img);

// Central-difference gradient magnitude binarized at the edge_quantile order
// statistic; output pixels are exactly 0 or 1.
GrayImage edge_detect(const GrayImage& img, const DetectionParams& params);

// Pixel-driven discretization: each pixel adds its intensity to the nearest
// rho bin for every theta, so each theta row carries the total image mass.
Sinogram radon_transform(const GrayImage& img, int n_theta, int n_rho);

// Bins above the threshold that are maxima of their nms window, strongest
// first. Ties inside a window are broken by scan order so a flat plateau
// yields exactly one peak.
std::vector<LineFeature> find_peaks(const Sinogram& sino,
                                    const DetectionParams& params);

// Rasterizes x*cos(theta) - y*sin(theta) = rho (image-center origin) clipped
// to the image; every returned pixel is within 0.71 px of the ideal line.
std::vector<PixelCoord> backproject_peak(const LineFeature& feature, int width,
                                         int height);

// Full pipeline: optional Laplacian, edge detection, Radon transform, peak
// thresholding, and back-projection of each peak onto an overlay copy of the
// input with line pixels set to the input maximum.
std::pair<std::vector<LineFeature>, GrayImage> detect_tripwires(
    const GrayImage& img, const DetectionParams& params);

// Default rho bin count for an image: diagonal in pixels rounded up to odd.
int default_n_rho(int width, int height);

}  // namespace indmath::imaging
