#ifndef ANICV_TEST_HELPERS_HPP
#define ANICV_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "anicv/energy.hpp"
#include "anicv/geometry.hpp"

namespace anicv::testing {

// ---------------------------------------------------------------------------
// Fixtures from the worked examples.

// Domain [-1,1]^2, f = indicator of A1 u A2 with A1 = [-1/2,1/2]^2 and
// A2 = [1/4,1/2] x [1/2,3/4]; 16 cells.
struct BreakExample {
    GridPtr grid;
    PcrImage f;
    Rect a1{-0.5, -0.5, 0.5, 0.5};
    Rect a2{0.25, 0.5, 0.5, 0.75};

    static BreakExample make() {
        Rect dom{-1, -1, 1, 1};
        Rect a1{-0.5, -0.5, 0.5, 0.5};
        Rect a2{0.25, 0.5, 0.5, 0.75};
        std::vector<Rect> rects = {a1, a2};
        GridPtr g = build_grid(dom, rects);
        std::vector<double> vals = {1.0, 1.0};
        PcrImage f = PcrImage::from_rects(g, 0.0, rects, vals);
        return {g, f, a1, a2};
    }
    CellSet a1_set() const { return CellSet::from_rect(grid, a1); }
    CellSet a2_set() const { return CellSet::from_rect(grid, a2); }
};

// Three-phase counterexample instance: squares C1, C2, C3 inside a large
// square domain, f = 1 on C1 and C2, 1/2 on C3, 0 elsewhere.
struct CounterExample {
    GridPtr grid;
    PcrImage f;
    Rect c1{-1, -20, 1, -18}, c2{-0.5, -0.5, 0.5, 0.5}, c3{-2, 17, 2, 21};

    static CounterExample make() {
        Rect dom{-38, -38, 38, 38};
        CounterExample ce{nullptr, PcrImage(make_grid({0, 1}, {0, 1}), {0.0})};
        std::vector<Rect> rects = {ce.c1, ce.c2, ce.c3};
        ce.grid = build_grid(dom, rects);
        std::vector<double> vals = {1.0, 1.0, 0.5};
        ce.f = PcrImage::from_rects(ce.grid, 0.0, rects, vals);
        return ce;
    }
    CellSet c1_set() const { return CellSet::from_rect(grid, c1); }
    CellSet c2_set() const { return CellSet::from_rect(grid, c2); }
    CellSet c3_set() const { return CellSet::from_rect(grid, c3); }
};

// ---------------------------------------------------------------------------
// Random instance generators (deterministic given the engine state).

inline std::vector<double> random_lines(std::mt19937_64& rng, int segments, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::set<double> interior;
    while (static_cast<int>(interior.size()) < segments - 1) {
        double v = dist(rng);
        if (v > lo && v < hi) interior.insert(v);
    }
    std::vector<double> lines = {lo};
    lines.insert(lines.end(), interior.begin(), interior.end());
    lines.push_back(hi);
    return lines;
}

inline GridPtr random_grid(std::mt19937_64& rng, int max_cells_per_axis = 4) {
    std::uniform_int_distribution<int> n(2, max_cells_per_axis);
    return make_grid(random_lines(rng, n(rng), 0.0, 1.0), random_lines(rng, n(rng), 0.0, 1.0));
}

inline PcrImage random_pcr(std::mt19937_64& rng, GridPtr grid) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> vals(grid->cell_count());
    for (double& v : vals) v = dist(rng);
    return PcrImage(std::move(grid), std::move(vals));
}

inline PcrImage random_pcr(std::mt19937_64& rng, int max_cells_per_axis = 4) {
    return random_pcr(rng, random_grid(rng, max_cells_per_axis));
}

inline CellSet random_cellset(std::mt19937_64& rng, GridPtr grid) {
    std::bernoulli_distribution coin(0.5);
    std::vector<bool> in(grid->cell_count());
    for (size_t i = 0; i < in.size(); ++i) in[i] = coin(rng);
    return CellSet(std::move(grid), std::move(in));
}

inline NestedChain random_chain(std::mt19937_64& rng, GridPtr grid, int phases) {
    // Random levels via a random labelling into 1..phases.
    std::uniform_int_distribution<int> lab(1, phases);
    std::vector<int> level(grid->cell_count());
    for (int& l : level) l = lab(rng);
    std::vector<CellSet> sets;
    sets.push_back(CellSet::empty_set(grid));
    for (int i = 1; i < phases; ++i) {
        std::vector<bool> in(grid->cell_count());
        for (size_t c = 0; c < in.size(); ++c) in[c] = level[c] <= i;
        sets.emplace_back(grid, std::move(in));
    }
    sets.push_back(CellSet::full_set(grid));
    return NestedChain(grid, std::move(sets));
}

// ---------------------------------------------------------------------------
// Independent oracles. These recompute quantities along a different route
// than the library and stay deliberately naive.

// Cell count of the arrangement of rectangles inside a domain via a sweep
// over the distinct corner coordinates.
inline int sweepline_cell_count(const Rect& domain, const std::vector<Rect>& rects) {
    std::set<double> xs = {domain.x0, domain.x1}, ys = {domain.y0, domain.y1};
    for (const Rect& r : rects) {
        xs.insert(r.x0);
        xs.insert(r.x1);
        ys.insert(r.y0);
        ys.insert(r.y1);
    }
    return static_cast<int>((xs.size() - 1) * (ys.size() - 1));
}

// Per1 recomputed from the cell rectangles: shared side length between every
// pair of touching member/non-member cells.
inline double naive_per1(const CellSet& e) {
    const Grid& g = *e.grid();
    double p = 0;
    for (int a = 0; a < g.cell_count(); ++a)
        for (int b = a + 1; b < g.cell_count(); ++b) {
            if (e.contains(a) == e.contains(b)) continue;
            Rect ra = g.cell_rect(a), rb = g.cell_rect(b);
            if (ra.x1 == rb.x0 || rb.x1 == ra.x0) {
                double lo = std::max(ra.y0, rb.y0), hi = std::min(ra.y1, rb.y1);
                if (hi > lo) p += hi - lo;
            } else if (ra.y1 == rb.y0 || rb.y1 == ra.y0) {
                double lo = std::max(ra.x0, rb.x0), hi = std::min(ra.x1, rb.x1);
                if (hi > lo) p += hi - lo;
            }
        }
    return p;
}

// The nested multiphase energy collapses to a Potts form: every edge between
// cells of different levels counts once, plus per-cell fidelity.
inline double potts_energy_gn(const NestedChain& chain, const std::vector<double>& c, double mu,
                              const PcrImage& f) {
    const Grid& g = *f.grid();
    std::vector<int> level(g.cell_count(), chain.phases());
    for (int i = chain.phases(); i >= 1; --i)
        for (int cell = 0; cell < g.cell_count(); ++cell)
            if (chain.level(i).contains(cell)) level[cell] = i;
    double e = 0;
    for (const Grid::Edge& ed : g.interior_edges())
        if (level[ed.a] != level[ed.b]) e += ed.len;
    for (int cell = 0; cell < g.cell_count(); ++cell)
        e += mu * g.cell_area(cell) * std::pow(c[level[cell] - 1] - f.value(cell), 2);
    return e;
}

// Exhaustive minimum of an arbitrary subset energy on small grids.
template <typename EnergyFn>
std::pair<CellSet, double> exhaustive_min(GridPtr grid, EnergyFn&& energy) {
    int n = grid->cell_count();
    if (n > 20) throw std::invalid_argument("exhaustive_min: too many cells");
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<bool> in(n);
        for (int i = 0; i < n; ++i) in[i] = (mask >> i) & 1;
        double e = energy(CellSet(grid, in));
        if (e < best) {
            best = e;
            best_mask = mask;
        }
    }
    std::vector<bool> in(n);
    for (int i = 0; i < n; ++i) in[i] = (best_mask >> i) & 1;
    return {CellSet(grid, in), best};
}

} // namespace anicv::testing

#endif
