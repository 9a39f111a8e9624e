#include "anicv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace anicv {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool strictly_increasing(const std::vector<double>& v) {
    for (size_t i = 0; i + 1 < v.size(); ++i)
        if (!(v[i] < v[i + 1])) return false;
    return true;
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Index of the interval [lines[i], lines[i+1]) containing x; last interval is closed.
int interval_index(const std::vector<double>& lines, double x) {
    if (x < lines.front() || x > lines.back()) return -1;
    auto it = std::upper_bound(lines.begin(), lines.end(), x);
    int i = static_cast<int>(it - lines.begin()) - 1;
    return std::min(i, static_cast<int>(lines.size()) - 2);
}

// Exact position of x in lines, or -1.
int line_index(const std::vector<double>& lines, double x) {
    auto it = std::lower_bound(lines.begin(), lines.end(), x);
    if (it != lines.end() && *it == x) return static_cast<int>(it - lines.begin());
    return -1;
}

} // namespace

Grid::Grid(std::vector<double> xlines, std::vector<double> ylines)
    : xlines_(std::move(xlines)), ylines_(std::move(ylines)) {
    require(xlines_.size() >= 2 && ylines_.size() >= 2, "grid needs at least 2 lines per axis");
    require(all_finite(xlines_) && all_finite(ylines_), "grid coordinates must be finite");
    require(strictly_increasing(xlines_) && strictly_increasing(ylines_),
            "grid lines must be strictly increasing");

    // Vertical separators (between horizontal neighbours), then horizontal ones.
    for (int iy = 0; iy < ny(); ++iy)
        for (int ix = 0; ix + 1 < nx(); ++ix)
            edges_.push_back({cell_index(ix, iy), cell_index(ix + 1, iy), cell_height(iy)});
    for (int iy = 0; iy + 1 < ny(); ++iy)
        for (int ix = 0; ix < nx(); ++ix)
            edges_.push_back({cell_index(ix, iy), cell_index(ix, iy + 1), cell_width(ix)});
}

int Grid::cell_at(double x, double y) const {
    int ix = interval_index(xlines_, x);
    int iy = interval_index(ylines_, y);
    if (ix < 0 || iy < 0) return -1;
    return cell_index(ix, iy);
}

GridPtr make_grid(std::vector<double> xlines, std::vector<double> ylines) {
    return std::make_shared<Grid>(std::move(xlines), std::move(ylines));
}

GridPtr common_refinement(const Grid& a, const Grid& b) {
    require(a.domain().x0 == b.domain().x0 && a.domain().x1 == b.domain().x1 &&
                a.domain().y0 == b.domain().y0 && a.domain().y1 == b.domain().y1,
            "common refinement needs identical domains");
    auto merge = [](const std::vector<double>& u, const std::vector<double>& v) {
        std::vector<double> out;
        std::set_union(u.begin(), u.end(), v.begin(), v.end(), std::back_inserter(out));
        return out;
    };
    return make_grid(merge(a.xlines(), b.xlines()), merge(a.ylines(), b.ylines()));
}

CellSet::CellSet(GridPtr grid, std::vector<bool> membership)
    : grid_(std::move(grid)), in_(std::move(membership)) {
    require(static_cast<int>(in_.size()) == grid_->cell_count(),
            "membership length must equal cell count");
}

CellSet CellSet::empty_set(GridPtr grid) {
    int n = grid->cell_count();
    return CellSet(std::move(grid), std::vector<bool>(n, false));
}

CellSet CellSet::full_set(GridPtr grid) {
    int n = grid->cell_count();
    return CellSet(std::move(grid), std::vector<bool>(n, true));
}

CellSet CellSet::from_rect(GridPtr grid, const Rect& r) {
    int ix0 = line_index(grid->xlines(), r.x0);
    int ix1 = line_index(grid->xlines(), r.x1);
    int iy0 = line_index(grid->ylines(), r.y0);
    int iy1 = line_index(grid->ylines(), r.y1);
    require(ix0 >= 0 && ix1 >= 0 && iy0 >= 0 && iy1 >= 0, "rect sides must lie on grid lines");
    require(ix0 < ix1 && iy0 < iy1, "rect must have positive area");
    std::vector<bool> in(grid->cell_count(), false);
    for (int iy = iy0; iy < iy1; ++iy)
        for (int ix = ix0; ix < ix1; ++ix) in[grid->cell_index(ix, iy)] = true;
    return CellSet(std::move(grid), std::move(in));
}

void CellSet::check_same_grid(const CellSet& o) const {
    require(grid_ == o.grid_ || *grid_ == *o.grid_, "cell sets live on different grids");
}

int CellSet::count() const { return static_cast<int>(std::count(in_.begin(), in_.end(), true)); }

double CellSet::area() const {
    double a = 0;
    for (int i = 0; i < grid_->cell_count(); ++i)
        if (in_[i]) a += grid_->cell_area(i);
    return a;
}

CellSet CellSet::set_union(const CellSet& o) const {
    check_same_grid(o);
    std::vector<bool> r(in_.size());
    for (size_t i = 0; i < in_.size(); ++i) r[i] = in_[i] || o.in_[i];
    return CellSet(grid_, std::move(r));
}

CellSet CellSet::set_intersection(const CellSet& o) const {
    check_same_grid(o);
    std::vector<bool> r(in_.size());
    for (size_t i = 0; i < in_.size(); ++i) r[i] = in_[i] && o.in_[i];
    return CellSet(grid_, std::move(r));
}

CellSet CellSet::set_minus(const CellSet& o) const {
    check_same_grid(o);
    std::vector<bool> r(in_.size());
    for (size_t i = 0; i < in_.size(); ++i) r[i] = in_[i] && !o.in_[i];
    return CellSet(grid_, std::move(r));
}

CellSet CellSet::complement() const {
    std::vector<bool> r(in_.size());
    for (size_t i = 0; i < in_.size(); ++i) r[i] = !in_[i];
    return CellSet(grid_, std::move(r));
}

bool CellSet::is_subset_of(const CellSet& o) const {
    check_same_grid(o);
    for (size_t i = 0; i < in_.size(); ++i)
        if (in_[i] && !o.in_[i]) return false;
    return true;
}

double CellSet::sym_diff_area(const CellSet& o) const {
    check_same_grid(o);
    double a = 0;
    for (size_t i = 0; i < in_.size(); ++i)
        if (in_[i] != o.in_[i]) a += grid_->cell_area(static_cast<int>(i));
    return a;
}

bool CellSet::operator==(const CellSet& o) const {
    return (grid_ == o.grid_ || *grid_ == *o.grid_) && in_ == o.in_;
}

PcrImage::PcrImage(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    require(static_cast<int>(values_.size()) == grid_->cell_count(),
            "value list length must equal cell count");
    require(all_finite(values_), "cell values must be finite");
}

PcrImage PcrImage::constant(GridPtr grid, double value) {
    int n = grid->cell_count();
    return PcrImage(std::move(grid), std::vector<double>(n, value));
}

PcrImage PcrImage::from_rects(GridPtr grid, double base, std::span<const Rect> rects,
                              std::span<const double> values) {
    require(rects.size() == values.size(), "one value per rectangle");
    PcrImage img = constant(grid, base);
    for (size_t k = 0; k < rects.size(); ++k) {
        CellSet s = CellSet::from_rect(img.grid_, rects[k]);
        for (int i = 0; i < img.grid_->cell_count(); ++i)
            if (s.contains(i)) img.values_[i] = values[k];
    }
    return img;
}

double PcrImage::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double PcrImage::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

PcrImage PcrImage::resampled_to(GridPtr fine) const {
    for (double x : grid_->xlines())
        require(line_index(fine->xlines(), x) >= 0, "fine grid must contain every coarse x line");
    for (double y : grid_->ylines())
        require(line_index(fine->ylines(), y) >= 0, "fine grid must contain every coarse y line");
    std::vector<double> vals(fine->cell_count());
    for (int i = 0; i < fine->cell_count(); ++i) {
        Rect c = fine->cell_rect(i);
        int src = grid_->cell_at(0.5 * (c.x0 + c.x1), 0.5 * (c.y0 + c.y1));
        vals[i] = values_[src];
    }
    return PcrImage(std::move(fine), std::move(vals));
}

PcrImage PcrImage::coarsened() const {
    GridPtr minimal = build_grid(*this);
    std::vector<double> vals(minimal->cell_count());
    for (int i = 0; i < minimal->cell_count(); ++i) {
        Rect c = minimal->cell_rect(i);
        vals[i] = values_[grid_->cell_at(0.5 * (c.x0 + c.x1), 0.5 * (c.y0 + c.y1))];
    }
    return PcrImage(std::move(minimal), std::move(vals));
}

NestedChain::NestedChain(GridPtr grid, std::vector<CellSet> sets)
    : grid_(std::move(grid)), sets_(std::move(sets)) {
    require(sets_.size() >= 2, "chain needs at least the empty and full sets");
    require(sets_.front().count() == 0, "chain must start at the empty set");
    require(sets_.back().count() == grid_->cell_count(), "chain must end at the full set");
    for (size_t i = 0; i + 1 < sets_.size(); ++i)
        require(sets_[i].is_subset_of(sets_[i + 1]), "chain sets must be nested");
}

bool PhaseConstants::strictly_decreasing() const {
    for (size_t i = 0; i + 1 < c.size(); ++i)
        if (!(c[i] > c[i + 1])) return false;
    return true;
}

void PhaseConstants::derive_midpoint_taus() {
    tau.clear();
    for (size_t i = 0; i + 1 < c.size(); ++i) tau.push_back(0.5 * (c[i] + c[i + 1]));
}

GridPtr build_grid(const PcrImage& f) {
    const Grid& g = *f.grid();
    std::vector<double> xs = {g.xlines().front(), g.xlines().back()};
    std::vector<double> ys = {g.ylines().front(), g.ylines().back()};
    // An interior line survives iff some neighbouring cell pair jumps across it.
    for (int ix = 1; ix < g.nx(); ++ix)
        for (int iy = 0; iy < g.ny(); ++iy)
            if (f.value(g.cell_index(ix - 1, iy)) != f.value(g.cell_index(ix, iy))) {
                xs.push_back(g.xlines()[ix]);
                break;
            }
    for (int iy = 1; iy < g.ny(); ++iy)
        for (int ix = 0; ix < g.nx(); ++ix)
            if (f.value(g.cell_index(ix, iy - 1)) != f.value(g.cell_index(ix, iy))) {
                ys.push_back(g.ylines()[iy]);
                break;
            }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return make_grid(std::move(xs), std::move(ys));
}

GridPtr build_grid(const Rect& domain, std::span<const Rect> rects) {
    require(domain.width() > 0 && domain.height() > 0, "domain must have positive area");
    std::vector<double> xs = {domain.x0, domain.x1};
    std::vector<double> ys = {domain.y0, domain.y1};
    for (const Rect& r : rects) {
        require(std::isfinite(r.x0) && std::isfinite(r.x1) && std::isfinite(r.y0) &&
                    std::isfinite(r.y1),
                "rectangle coordinates must be finite");
        require(r.width() > 0 && r.height() > 0, "degenerate rectangle");
        require(r.x0 >= domain.x0 && r.x1 <= domain.x1 && r.y0 >= domain.y0 && r.y1 <= domain.y1,
                "rectangle outside the domain");
        xs.push_back(r.x0);
        xs.push_back(r.x1);
        ys.push_back(r.y0);
        ys.push_back(r.y1);
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    return make_grid(std::move(xs), std::move(ys));
}

CellSet threshold(const PcrImage& u, double tau, bool strict) {
    std::vector<bool> in(u.grid()->cell_count());
    for (int i = 0; i < u.grid()->cell_count(); ++i)
        in[i] = strict ? (u.value(i) > tau) : (u.value(i) >= tau);
    return CellSet(u.grid(), std::move(in));
}

double region_mean(const PcrImage& f, const CellSet& region) {
    double a = 0, s = 0;
    for (int i = 0; i < f.grid()->cell_count(); ++i)
        if (region.contains(i)) {
            double ca = f.grid()->cell_area(i);
            a += ca;
            s += ca * f.value(i);
        }
    if (a <= 0) throw EmptyPhaseError(-1);
    return s / a;
}

NestedChain level_chain(const PcrImage& u, std::span<const double> taus, bool strict) {
    for (size_t i = 0; i + 1 < taus.size(); ++i)
        if (!(taus[i] > taus[i + 1]))
            throw std::invalid_argument("thresholds must be strictly decreasing");
    std::vector<CellSet> sets;
    sets.push_back(CellSet::empty_set(u.grid()));
    for (double t : taus) sets.push_back(threshold(u, t, strict));
    sets.push_back(CellSet::full_set(u.grid()));
    return NestedChain(u.grid(), std::move(sets));
}

} // namespace anicv
