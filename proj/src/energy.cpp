#include "anicv/energy.hpp"

#include <cmath>
#include <limits>

namespace anicv {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double sq(double x) { return x * x; }

double fidelity(const PcrImage& f, const CellSet& region, double c) {
    double s = 0;
    for (int i = 0; i < f.grid()->cell_count(); ++i)
        if (region.contains(i)) s += f.grid()->cell_area(i) * sq(c - f.value(i));
    return s;
}

} // namespace

double per1(const CellSet& e) {
    double p = 0;
    for (const Grid::Edge& ed : e.grid()->interior_edges())
        if (e.contains(ed.a) != e.contains(ed.b)) p += ed.len;
    return p;
}

double rel_per1(const CellSet& inner, const CellSet& outer) {
    require(inner.is_subset_of(outer), "rel_per1 needs inner contained in outer");
    double p = 0;
    for (const Grid::Edge& ed : inner.grid()->interior_edges()) {
        bool ia = inner.contains(ed.a), ib = inner.contains(ed.b);
        if (ia == ib) continue;
        // The non-inner endpoint must still belong to outer.
        if (outer.contains(ia ? ed.b : ed.a)) p += ed.len;
    }
    return p;
}

double total_variation1(const PcrImage& u) {
    double tv = 0;
    for (const Grid::Edge& ed : u.grid()->interior_edges())
        tv += ed.len * std::abs(u.value(ed.a) - u.value(ed.b));
    return tv;
}

double energy_arof(const PcrImage& u, const PcrImage& f, double lambda) {
    require(lambda > 0, "lambda must be positive");
    if (*u.grid() == *f.grid()) {
        double fid = 0;
        for (int i = 0; i < u.grid()->cell_count(); ++i)
            fid += u.grid()->cell_area(i) * sq(u.value(i) - f.value(i));
        return total_variation1(u) + 0.5 * lambda * fid;
    }
    GridPtr fine = common_refinement(*u.grid(), *f.grid());
    return energy_arof(u.resampled_to(fine), f.resampled_to(fine), lambda);
}

double energy_acv(const CellSet& e, double c1, double c2, double mu, const PcrImage& f) {
    require(mu > 0, "mu must be positive");
    require(c1 >= 0 && c1 <= 1 && c2 >= 0 && c2 <= 1, "constants must lie in [0,1]");
    return per1(e) + mu * (fidelity(f, e, c1) + fidelity(f, e.complement(), c2));
}

double energy_g2(const PcrImage& u, double c1, double c2, double mu, const PcrImage& f) {
    require(mu > 0, "mu must be positive");
    require(*u.grid() == *f.grid(), "u and f must share a grid");
    double fid = 0;
    for (int i = 0; i < u.grid()->cell_count(); ++i) {
        double v = u.value(i);
        if (v < 0 || v > 1) return std::numeric_limits<double>::infinity();
        fid += u.grid()->cell_area(i) * (v * sq(c1 - f.value(i)) + (1 - v) * sq(c2 - f.value(i)));
    }
    return total_variation1(u) + mu * fid;
}

double energy_gn(const NestedChain& chain, const PhaseConstants& c, double mu,
                 const PcrImage& f) {
    require(c.phases() == chain.phases(), "one constant per phase");
    require(mu > 0, "mu must be positive");
    double e = 0;
    for (int i = 1; i <= chain.phases(); ++i) {
        e += rel_per1(chain.level(i - 1), chain.level(i));
        e += mu * fidelity(f, chain.band(i), c.c[i - 1]);
    }
    return e;
}

double energy_cvn(std::span<const CellSet> partition, std::span<const double> c,
                  std::span<const double> mu, const PcrImage& f) {
    int n = static_cast<int>(partition.size());
    require(n >= 1, "partition must be non-empty");
    require(static_cast<int>(c.size()) == n && static_cast<int>(mu.size()) == n,
            "one constant and one mu per part");
    // Disjointness and coverage.
    std::vector<int> owner(f.grid()->cell_count(), -1);
    for (int i = 0; i < n; ++i)
        for (int cell = 0; cell < f.grid()->cell_count(); ++cell)
            if (partition[i].contains(cell)) {
                require(owner[cell] < 0, "partition parts overlap");
                owner[cell] = i;
            }
    for (int cell = 0; cell < f.grid()->cell_count(); ++cell)
        require(owner[cell] >= 0, "partition does not cover the domain");

    double e = 0;
    CellSet prefix = CellSet::empty_set(f.grid());
    for (int i = 0; i < n; ++i) {
        require(mu[i] >= 0, "mu must be non-negative");
        prefix = prefix.set_union(partition[i]);
        if (i + 1 < n) e += per1(prefix); // last prefix is the full domain: Per1 = 0
        e += mu[i] * fidelity(f, partition[i], c[i]);
    }
    return e;
}

double energy_trofn(const NestedChain& chain, std::span<const double> tau, double lambda,
                    const PcrImage& f) {
    require(static_cast<int>(tau.size()) == chain.phases() - 1, "n-1 thresholds for n phases");
    require(lambda > 0, "lambda must be positive");
    double e = 0;
    for (int i = 1; i < chain.phases(); ++i) {
        const CellSet& s = chain.level(i);
        double lin = 0;
        for (int cell = 0; cell < f.grid()->cell_count(); ++cell)
            if (s.contains(cell))
                lin += f.grid()->cell_area(cell) * (tau[i - 1] - f.value(cell));
        e += per1(s) + lambda * lin;
    }
    return e;
}

} // namespace anicv
