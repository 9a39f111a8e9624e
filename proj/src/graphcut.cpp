#include "anicv/graphcut.hpp"

#include <algorithm>
#include <cmath>

#include "anicv/energy.hpp"

namespace anicv {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

CutProblem CutProblem::with_edge_lengths(GridPtr grid) {
    std::vector<double> pw;
    pw.reserve(grid->interior_edges().size());
    for (const Grid::Edge& e : grid->interior_edges()) pw.push_back(e.len);
    CutProblem p{grid, std::vector<double>(grid->cell_count(), 0.0), std::move(pw),
                 CellSet::empty_set(grid), CellSet::empty_set(grid)};
    return p;
}

void CutProblem::validate() const {
    require(static_cast<int>(unary.size()) == grid->cell_count(), "one unary weight per cell");
    require(pairwise.size() == grid->interior_edges().size(), "one pairwise weight per edge");
    for (double w : pairwise) require(w >= 0, "pairwise weights must be non-negative");
    for (double u : unary) require(std::isfinite(u), "unary weights must be finite");
    require(forced_in.set_intersection(forced_out).count() == 0,
            "forced_in and forced_out overlap: infeasible constraints");
}

MinCutResult min_cut_binary(const CutProblem& p, TieBreak tie) {
    p.validate();
    const Grid& g = *p.grid;
    int n = g.cell_count();
    int s = n, t = n + 1;

    double finite_total = 1.0;
    for (double u : p.unary) finite_total += std::abs(u);
    for (double w : p.pairwise) finite_total += w;

    FlowNetwork net(n + 2);
    for (int c = 0; c < n; ++c) {
        if (p.forced_in.contains(c))
            net.add_arc(s, c, finite_total);
        else if (p.forced_out.contains(c))
            net.add_arc(c, t, finite_total);
        if (p.unary[c] > 0)
            net.add_arc(c, t, p.unary[c]);
        else if (p.unary[c] < 0)
            net.add_arc(s, c, -p.unary[c]);
    }
    const auto& edges = g.interior_edges();
    for (size_t e = 0; e < edges.size(); ++e) {
        if (p.pairwise[e] > 0) {
            net.add_arc(edges[e].a, edges[e].b, p.pairwise[e]);
            net.add_arc(edges[e].b, edges[e].a, p.pairwise[e]);
        }
    }

    net.max_flow(s, t);
    std::vector<bool> min_side = net.min_cut_source_side(s);
    std::vector<bool> max_side = net.max_cut_source_side(t);

    bool unique = true;
    for (int c = 0; c < n; ++c)
        if (min_side[c] != max_side[c]) {
            unique = false;
            break;
        }

    const std::vector<bool>& side = (tie == TieBreak::minimal) ? min_side : max_side;
    std::vector<bool> in(n);
    for (int c = 0; c < n; ++c) in[c] = side[c];
    CellSet set(p.grid, std::move(in));

    // Evaluate the energy directly on the returned set; the flow value is the
    // same number up to the reduction offset but accumulates more roundoff.
    double energy = 0;
    for (int c = 0; c < n; ++c)
        if (set.contains(c)) energy += p.unary[c];
    for (size_t e = 0; e < edges.size(); ++e)
        if (set.contains(edges[e].a) != set.contains(edges[e].b)) energy += p.pairwise[e];

    return {std::move(set), energy, unique};
}

CutProblem parametric_cut_problem(const PcrImage& f, double lambda, double tau) {
    require(lambda > 0, "lambda must be positive");
    CutProblem p = CutProblem::with_edge_lengths(f.grid());
    for (int c = 0; c < f.grid()->cell_count(); ++c)
        p.unary[c] = lambda * f.grid()->cell_area(c) * (tau - f.value(c));
    return p;
}

CutProblem acv_cut_problem(const PcrImage& f, double c1, double c2, double mu) {
    require(mu > 0, "mu must be positive");
    CutProblem p = CutProblem::with_edge_lengths(f.grid());
    for (int c = 0; c < f.grid()->cell_count(); ++c)
        p.unary[c] =
            mu * (c1 - c2) * (c1 + c2 - 2 * f.value(c)) * f.grid()->cell_area(c);
    return p;
}

CutProblem level_cut_problem(const PcrImage& f, const CellSet& below, const CellSet& above,
                             double ci, double cj, double mu) {
    require(below.is_subset_of(above), "below must be contained in above");
    require(mu > 0, "mu must be positive");
    const Grid& g = *f.grid();
    CutProblem p = CutProblem::with_edge_lengths(f.grid());
    auto free = [&](int c) { return above.contains(c) && !below.contains(c); };
    for (int c = 0; c < g.cell_count(); ++c)
        p.unary[c] = free(c) ? mu * (ci - cj) * (ci + cj - 2 * f.value(c)) * g.cell_area(c) : 0.0;
    const auto& edges = g.interior_edges();
    for (size_t e = 0; e < edges.size(); ++e)
        if (!free(edges[e].a) || !free(edges[e].b)) p.pairwise[e] = 0.0;
    p.forced_in = below;
    p.forced_out = above.complement();
    return p;
}

namespace {

// One contracted parametric cut: cells outside `cells` are fixed by their
// value bracket (w >= mid joins the set, w <= mid stays out), which turns
// their boundary edges into unary corrections on the free cells.
std::vector<bool> contracted_parametric_cut(const PcrImage& f, double lambda, double mid,
                                            const std::vector<int>& cells,
                                            const std::vector<double>& wlo,
                                            const std::vector<double>& whi) {
    const Grid& g = *f.grid();
    int m = static_cast<int>(cells.size());
    std::vector<int> local(g.cell_count(), -1);
    for (int i = 0; i < m; ++i) local[cells[i]] = i;

    int s = m, t = m + 1;
    std::vector<double> unary(m);
    for (int i = 0; i < m; ++i)
        unary[i] = lambda * g.cell_area(cells[i]) * (mid - f.value(cells[i]));

    struct Pair {
        int a, b;
        double len;
    };
    std::vector<Pair> pairs;
    for (const Grid::Edge& e : g.interior_edges()) {
        int la = local[e.a], lb = local[e.b];
        if (la >= 0 && lb >= 0) {
            pairs.push_back({la, lb, e.len});
        } else if (la >= 0 || lb >= 0) {
            int freec = la >= 0 ? la : lb;
            int fixedc = la >= 0 ? e.b : e.a;
            if (wlo[fixedc] >= mid)
                unary[freec] -= e.len; // fixed neighbour inside: cut iff free cell leaves
            else if (whi[fixedc] <= mid)
                unary[freec] += e.len; // fixed neighbour outside: cut iff free cell joins
            else
                throw std::logic_error("parametric bracket invariant violated");
        }
    }

    FlowNetwork net(m + 2);
    for (int i = 0; i < m; ++i) {
        if (unary[i] > 0)
            net.add_arc(i, t, unary[i]);
        else if (unary[i] < 0)
            net.add_arc(s, i, -unary[i]);
    }
    for (const Pair& pr : pairs) {
        net.add_arc(pr.a, pr.b, pr.len);
        net.add_arc(pr.b, pr.a, pr.len);
    }
    net.max_flow(s, t);
    std::vector<bool> side = net.min_cut_source_side(s);
    side.resize(m);
    return side;
}

// Snap bisection approximations to the values forced by the level-set
// optimality identity: on the plateau P below the already-resolved set S,
//   Per1(S u P) - Per1(S) + lambda * integral_P (v - f) = 0.
void snap_values(const PcrImage& f, double lambda, std::vector<double>& w) {
    const Grid& g = *f.grid();
    int n = g.cell_count();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return w[a] > w[b]; });

    std::vector<std::vector<int>> groups;
    for (int idx : order) {
        if (groups.empty() || w[groups.back().front()] - w[idx] > 1e-7)
            groups.emplace_back();
        groups.back().push_back(idx);
    }

    std::vector<bool> upper(n, false);
    CellSet s_set(f.grid(), upper);
    for (const auto& grp : groups) {
        std::vector<bool> t_bits = s_set.membership();
        double area = 0, fsum = 0;
        for (int c : grp) {
            t_bits[c] = true;
            area += g.cell_area(c);
            fsum += g.cell_area(c) * f.value(c);
        }
        CellSet t_set(f.grid(), t_bits);
        double v = fsum / area - (per1(t_set) - per1(s_set)) / (lambda * area);
        if (std::abs(v - w[grp.front()]) <= 1e-9)
            for (int c : grp) w[c] = v;
        s_set = std::move(t_set);
    }
}

} // namespace

PcrImage solve_arof_exact(const PcrImage& f, double lambda) {
    require(lambda > 0, "lambda must be positive");
    require(f.min_value() >= 0 && f.max_value() <= 1, "datum values must lie in [0,1]");
    const Grid& g = *f.grid();
    int n = g.cell_count();

    double fmin = f.min_value(), fmax = f.max_value();
    if (fmin == fmax) return PcrImage::constant(f.grid(), fmin);

    // Value brackets per cell; frames subdivide them until they collapse.
    std::vector<double> wlo(n, fmin - 1.0), whi(n, fmax + 1.0);
    struct Frame {
        double lo, hi;
        std::vector<int> cells;
    };
    std::vector<Frame> stack;
    {
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        stack.push_back({fmin - 1.0, fmax + 1.0, std::move(all)});
    }

    std::vector<double> w(n, fmin);
    const double width_eps = 3e-15;
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        if (fr.hi - fr.lo <= width_eps) {
            double v = 0.5 * (fr.lo + fr.hi);
            for (int c : fr.cells) w[c] = v;
            continue;
        }
        double mid = 0.5 * (fr.lo + fr.hi);
        std::vector<bool> in = contracted_parametric_cut(f, lambda, mid, fr.cells, wlo, whi);
        Frame up{mid, fr.hi, {}}, down{fr.lo, mid, {}};
        for (size_t i = 0; i < fr.cells.size(); ++i) {
            int c = fr.cells[i];
            if (in[i]) {
                wlo[c] = mid;
                up.cells.push_back(c);
            } else {
                whi[c] = mid;
                down.cells.push_back(c);
            }
        }
        if (!up.cells.empty()) stack.push_back(std::move(up));
        if (!down.cells.empty()) stack.push_back(std::move(down));
    }

    snap_values(f, lambda, w);
    for (double& v : w) v = std::clamp(v, fmin, fmax);
    return PcrImage(f.grid(), std::move(w));
}

} // namespace anicv
