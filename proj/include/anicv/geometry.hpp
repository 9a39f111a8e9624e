#ifndef ANICV_GEOMETRY_HPP
#define ANICV_GEOMETRY_HPP

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace anicv {

/// Raised when an operation needs a phase of positive area and gets none.
/// Alternating algorithms catch it and drop the phase.
struct EmptyPhaseError : std::runtime_error {
    explicit EmptyPhaseError(int phase_index)
        : std::runtime_error("empty phase " + std::to_string(phase_index)),
          phase(phase_index) {}
    int phase;
};

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
};

/// Sorted x/y lines partitioning a rectangular domain into cells.
/// Cells are indexed row-major, iy * nx + ix, with iy = 0 at the smallest y.
class Grid {
public:
    Grid(std::vector<double> xlines, std::vector<double> ylines);

    int nx() const { return static_cast<int>(xlines_.size()) - 1; }
    int ny() const { return static_cast<int>(ylines_.size()) - 1; }
    int cell_count() const { return nx() * ny(); }
    int cell_index(int ix, int iy) const { return iy * nx() + ix; }
    std::pair<int, int> cell_coords(int idx) const { return {idx % nx(), idx / nx()}; }

    double cell_width(int ix) const { return xlines_[ix + 1] - xlines_[ix]; }
    double cell_height(int iy) const { return ylines_[iy + 1] - ylines_[iy]; }
    double cell_area(int idx) const {
        auto [ix, iy] = cell_coords(idx);
        return cell_width(ix) * cell_height(iy);
    }
    Rect cell_rect(int idx) const {
        auto [ix, iy] = cell_coords(idx);
        return {xlines_[ix], ylines_[iy], xlines_[ix + 1], ylines_[iy + 1]};
    }

    Rect domain() const { return {xlines_.front(), ylines_.front(), xlines_.back(), ylines_.back()}; }
    double domain_area() const { return domain().area(); }

    const std::vector<double>& xlines() const { return xlines_; }
    const std::vector<double>& ylines() const { return ylines_; }

    /// Index of the cell containing (x, y); points on a line go to the upper cell.
    /// Returns -1 outside the domain.
    int cell_at(double x, double y) const;

    /// Interior edge between cells a < b with its geometric length.
    struct Edge {
        int a, b;
        double len;
    };
    /// All interior edges, vertical separators first, fixed order.
    const std::vector<Edge>& interior_edges() const { return edges_; }

    bool operator==(const Grid& other) const {
        return xlines_ == other.xlines_ && ylines_ == other.ylines_;
    }

private:
    std::vector<double> xlines_, ylines_;
    std::vector<Edge> edges_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(std::vector<double> xlines, std::vector<double> ylines);

/// Union of two line sets by exact coordinate equality (no epsilon snapping).
GridPtr common_refinement(const Grid& a, const Grid& b);

/// A rectilinear polygon represented as a set of grid cells.
class CellSet {
public:
    CellSet(GridPtr grid, std::vector<bool> membership);
    static CellSet empty_set(GridPtr grid);
    static CellSet full_set(GridPtr grid);
    /// Cells whose closure lies in r; r sides must lie on grid lines (checked).
    static CellSet from_rect(GridPtr grid, const Rect& r);

    const GridPtr& grid() const { return grid_; }
    bool contains(int cell) const { return in_[cell]; }
    const std::vector<bool>& membership() const { return in_; }
    int count() const;
    double area() const;

    CellSet set_union(const CellSet& o) const;
    CellSet set_intersection(const CellSet& o) const;
    CellSet set_minus(const CellSet& o) const;
    CellSet complement() const;
    bool is_subset_of(const CellSet& o) const;
    double sym_diff_area(const CellSet& o) const;

    bool operator==(const CellSet& o) const;

private:
    GridPtr grid_;
    std::vector<bool> in_;
    void check_same_grid(const CellSet& o) const;
};

/// A piecewise-constant-on-rectangles function: one value per grid cell.
class PcrImage {
public:
    PcrImage(GridPtr grid, std::vector<double> values);
    static PcrImage constant(GridPtr grid, double value);
    /// Indicator-style image: base value outside, rect values painted on top
    /// (later rectangles win). Rect sides must lie on grid lines.
    static PcrImage from_rects(GridPtr grid, double base,
                               std::span<const Rect> rects, std::span<const double> values);

    const GridPtr& grid() const { return grid_; }
    double value(int cell) const { return values_[cell]; }
    const std::vector<double>& values() const { return values_; }
    double min_value() const;
    double max_value() const;

    /// Same function on a finer grid (every line of the current grid must
    /// appear in `fine`).
    PcrImage resampled_to(GridPtr fine) const;
    /// Same function on its minimal jump grid.
    PcrImage coarsened() const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

/// Nested chain empty = S_0 <= S_1 <= ... <= S_n = domain.
class NestedChain {
public:
    NestedChain(GridPtr grid, std::vector<CellSet> sets);

    const GridPtr& grid() const { return grid_; }
    int phases() const { return static_cast<int>(sets_.size()) - 1; }
    const CellSet& level(int i) const { return sets_[i]; }
    const std::vector<CellSet>& levels() const { return sets_; }
    /// Band S_i \ S_{i-1}, i in [1, phases()].
    CellSet band(int i) const { return sets_[i].set_minus(sets_[i - 1]); }

private:
    GridPtr grid_;
    std::vector<CellSet> sets_;
};

/// Phase constants c_1 >= ... >= c_n with optional thresholds between them.
struct PhaseConstants {
    std::vector<double> c;
    std::vector<double> tau;

    int phases() const { return static_cast<int>(c.size()); }
    bool strictly_decreasing() const;
    /// tau_i = (c_i + c_{i+1}) / 2.
    void derive_midpoint_taus();
};

/// Minimal grid holding every jump line of f plus the domain boundary.
GridPtr build_grid(const PcrImage& f);
/// Minimal grid generated by the domain and a set of rectangles.
/// Degenerate (zero-area) rectangles and rectangles outside the domain are rejected.
GridPtr build_grid(const Rect& domain, std::span<const Rect> rects);

/// Upper level set {u > tau} (strict) or {u >= tau}.
CellSet threshold(const PcrImage& u, double tau, bool strict = true);

/// Area-weighted mean of f over region; throws EmptyPhaseError on zero area.
double region_mean(const PcrImage& f, const CellSet& region);

/// Chain of upper level sets of u at strictly decreasing thresholds.
NestedChain level_chain(const PcrImage& u, std::span<const double> taus, bool strict = true);

} // namespace anicv

#endif
