#pragma once

#include <string>

#include "indmath/imaging.hpp"

namespace indmath::io {

// Binary PGM (P5, maxval 255). Larger maxvals and color formats are
// rejected as UnsupportedFormat.
imaging::GrayImage read_pgm(const std::string& path);

// Intensities are clamped to [0, 255] and rounded on write. The file is
// written to a temporary sibling and renamed into place.
void write_pgm(const imaging::GrayImage& img, const std::string& path);

}  // namespace indmath::io
