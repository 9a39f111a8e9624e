#ifndef ANICV_RASTER_HPP
#define ANICV_RASTER_HPP

#include <string>
#include <vector>

#include "anicv/geometry.hpp"
#include "anicv/pcr_io.hpp"

namespace anicv {

/// Grayscale raster with values in [0,1], row 0 at the top.
struct Raster {
    int width = 0, height = 0;
    double pitch = 1.0;
    std::vector<double> pixels;

    Raster() = default;
    Raster(int w, int h, double value = 0.0, double pitch_ = 1.0)
        : width(w), height(h), pitch(pitch_), pixels(static_cast<size_t>(w) * h, value) {}

    double& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    int pixel_count() const { return width * height; }
    double min_value() const;
    double max_value() const;
};

/// PGM (P2/P5) and grayscale PNG (8/16-bit). Loading clamps values to [0,1].
Raster read_raster_file(const std::string& path);
void write_pgm_file(const std::string& path, const Raster& r, int maxval = 255,
                    bool binary = true);
void write_png_file(const std::string& path, const Raster& r, int bit_depth = 8);
/// Dispatch on extension: .pgm, .png.
void write_raster_file(const std::string& path, const Raster& r);

/// Sample f at pixel centres on a uniform width x height raster covering the
/// domain of f; pitch = domain width / width.
Raster rasterize(const PcrImage& f, int width, int height);

/// View a raster as a PCR function on the uniform pixel grid with the given
/// lower-left corner.
PcrImage raster_to_pcr(const Raster& r, double x0 = 0.0, double y0 = 0.0);

/// Fraction of the label map's phase-boundary length that lies on lines of
/// the grid, mapping the raster uniformly onto the grid's domain. An edge
/// counts as on-grid when it sits within half a pixel of a grid line.
/// Returns 1 for label maps without boundaries.
double boundary_on_grid_fraction(const Raster& labels, const Grid& grid);

} // namespace anicv

#endif
