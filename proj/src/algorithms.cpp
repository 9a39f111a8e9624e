#include "anicv/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anicv/energy.hpp"

namespace anicv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::vector<double> interior_areas(const NestedChain& chain) {
    std::vector<double> a;
    for (int i = 1; i < chain.phases(); ++i) a.push_back(chain.level(i).area());
    return a;
}

double chain_sym_diff_sq(const NestedChain& a, const NestedChain& b) {
    if (a.phases() != b.phases()) return kInf;
    double s = 0;
    for (int i = 0; i <= a.phases(); ++i) {
        double d = a.level(i).sym_diff_area(b.level(i));
        s += d * d;
    }
    return s;
}

double cut_problem_value(const CutProblem& p, const CellSet& e) {
    double en = 0;
    for (int c = 0; c < p.grid->cell_count(); ++c)
        if (e.contains(c)) en += p.unary[c];
    const auto& edges = p.grid->interior_edges();
    for (size_t k = 0; k < edges.size(); ++k)
        if (e.contains(edges[k].a) != e.contains(edges[k].b)) en += p.pairwise[k];
    return en;
}

} // namespace

void StoppingRule::validate() const {
    if (!(eps_tol > 0)) throw std::invalid_argument("eps_tol must be positive");
    if (max_iters <= 0) throw std::invalid_argument("max_iters must be positive");
}

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::converged: return "converged";
        case StopReason::max_iters: return "max_iters";
        case StopReason::phase_collapsed: return "phase_collapsed";
    }
    return "unknown";
}

double acv_lambda(double mu, double c1, double c2) {
    require(mu > 0, "mu must be positive");
    require(c1 > c2, "constants must satisfy c1 > c2");
    return 2.0 * mu * (c1 - c2);
}

PhaseConstants update_constants(const NestedChain& chain, const PcrImage& f) {
    PhaseConstants pc;
    for (int i = 1; i <= chain.phases(); ++i) {
        CellSet band = chain.band(i);
        if (band.count() == 0) throw EmptyPhaseError(i);
        pc.c.push_back(region_mean(f, band));
    }
    pc.derive_midpoint_taus();
    return pc;
}

std::pair<double, double> update_constants(const CellSet& sigma, const PcrImage& f) {
    CellSet outside = sigma.complement();
    if (sigma.count() == 0) throw EmptyPhaseError(1);
    if (outside.count() == 0) throw EmptyPhaseError(2);
    return {region_mean(f, sigma), region_mean(f, outside)};
}

CellSet acv_from_arof(const PcrImage& w, double c1, double c2, bool strict) {
    require(c1 > c2, "constants must satisfy c1 > c2");
    return threshold(w, 0.5 * (c1 + c2), strict);
}

Segmentation2Result acv_segment(const PcrImage& f, double mu, const PhaseConstants& init,
                                const StoppingRule& stop, bool strict_threshold) {
    stop.validate();
    require(init.c.size() == 2, "two initial constants required");
    double c1 = init.c[0], c2 = init.c[1];
    require(c1 > c2, "initial constants must satisfy c1 > c2");
    require(mu > 0, "mu must be positive");

    IterationTrace trace;
    auto solve_step = [&](double a, double b) {
        PcrImage w = solve_arof_exact(f, acv_lambda(mu, a, b));
        return acv_from_arof(w, a, b, strict_threshold);
    };

    CellSet sigma = solve_step(c1, c2);
    trace.records.push_back({0,
                             {c1, c2},
                             {sigma.area()},
                             kInf,
                             kNaN,
                             energy_acv(sigma, c1, c2, mu, f),
                             kNaN});

    int k = 0;
    while (k < stop.max_iters) {
        double n1, n2;
        try {
            std::tie(n1, n2) = update_constants(sigma, f);
        } catch (const EmptyPhaseError& e) {
            trace.events.push_back("phase " + std::to_string(e.phase) + " collapsed");
            trace.stop = StopReason::phase_collapsed;
            return {sigma, c1, c2, trace};
        }
        if (!(n1 > n2)) {
            trace.events.push_back("constant ordering lost");
            trace.stop = StopReason::phase_collapsed;
            return {sigma, c1, c2, trace};
        }
        c1 = n1;
        c2 = n2;
        trace.records.back().energy_after_params = energy_acv(sigma, c1, c2, mu, f);

        CellSet next = solve_step(c1, c2);
        double guard = sigma.sym_diff_area(next);
        guard *= guard;
        ++k;
        trace.records.push_back({k,
                                 {c1, c2},
                                 {next.area()},
                                 guard,
                                 energy_acv(sigma, c1, c2, mu, f),
                                 energy_acv(next, c1, c2, mu, f),
                                 kNaN});
        sigma = std::move(next);
        if (guard <= stop.eps_tol) {
            trace.stop = StopReason::converged;
            return {sigma, c1, c2, trace};
        }
    }
    trace.stop = StopReason::max_iters;
    return {sigma, c1, c2, trace};
}

NestedChain gn_fixed_c_minimize(const PcrImage& f, const PhaseConstants& c, double mu,
                                const NestedChain* warm_start) {
    int n = c.phases();
    require(n >= 2, "need at least two phases");
    require(mu > 0, "mu must be positive");
    for (int i = 0; i + 1 < n; ++i)
        require(c.c[i] >= c.c[i + 1], "constants must be ordered non-increasingly");

    std::vector<CellSet> levels;
    if (warm_start) {
        require(warm_start->phases() == n, "warm start must have matching phase count");
        levels = warm_start->levels();
    } else {
        levels.push_back(CellSet::empty_set(f.grid()));
        for (int i = 0; i + 1 < n; ++i)
            levels.push_back(threshold(f, 0.5 * (c.c[i] + c.c[i + 1])));
        levels.push_back(CellSet::full_set(f.grid()));
        // Midpoint thresholds of f are nested for ordered constants; enforce
        // the chain shape against ties anyway.
        for (size_t i = 1; i < levels.size(); ++i)
            levels[i] = levels[i].set_union(levels[i - 1]);
    }

    const int max_sweeps = 1000;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool changed = false;
        for (int i = 1; i < n; ++i) {
            CutProblem p =
                level_cut_problem(f, levels[i - 1], levels[i + 1], c.c[i - 1], c.c[i], mu);
            auto r = min_cut_binary(p);
            double current = cut_problem_value(p, levels[i]);
            if (r.energy < current - 1e-12 && !(r.set == levels[i])) {
                levels[i] = std::move(r.set);
                changed = true;
            }
        }
        if (!changed) break;
    }
    return NestedChain(f.grid(), std::move(levels));
}

namespace {

// Shrink the chain by dropping a duplicated level (empty band) and its
// constant; returns the removed phase index.
void remove_phase(std::vector<CellSet>& levels, std::vector<double>& c, int band_index) {
    // Band i spans levels[i-1] .. levels[i]; they are equal here.
    int level_to_drop = band_index == static_cast<int>(c.size()) ? band_index - 1 : band_index;
    levels.erase(levels.begin() + level_to_drop);
    c.erase(c.begin() + band_index - 1);
}

} // namespace

SegmentationNResult gn_alternate(const PcrImage& f, double mu, const PhaseConstants& init,
                                 const StoppingRule& stop) {
    stop.validate();
    require(init.phases() >= 2, "need at least two phases");
    require(init.strictly_decreasing(), "initial constants must be strictly decreasing");
    require(mu > 0, "mu must be positive");

    std::vector<double> c = init.c;
    PhaseConstants pc{c, {}};
    NestedChain chain = gn_fixed_c_minimize(f, pc, mu);
    IterationTrace trace;
    trace.records.push_back({0, c, interior_areas(chain), kInf, kNaN,
                             energy_gn(chain, pc, mu, f), kNaN});

    int k = 0;
    while (k < stop.max_iters) {
        // Constants step with phase removal.
        bool removed = false;
        std::vector<CellSet> levels = chain.levels();
        while (true) {
            int empty_band = -1;
            for (int i = 1; i <= static_cast<int>(c.size()); ++i)
                if (levels[i].count() == levels[i - 1].count()) {
                    empty_band = i;
                    break;
                }
            if (empty_band < 0) break;
            remove_phase(levels, c, empty_band);
            trace.events.push_back("iteration " + std::to_string(k) + ": phase " +
                                   std::to_string(empty_band) + " removed (empty band)");
            removed = true;
            if (c.size() == 1) {
                double mean = region_mean(f, CellSet::full_set(f.grid()));
                NestedChain flat(f.grid(),
                                 {CellSet::empty_set(f.grid()), CellSet::full_set(f.grid())});
                trace.stop = StopReason::phase_collapsed;
                return {flat, PhaseConstants{{mean}, {}}, trace};
            }
        }
        chain = NestedChain(f.grid(), levels);

        PhaseConstants means = update_constants(chain, f);
        c = means.c;
        pc = PhaseConstants{c, {}};
        if (!pc.strictly_decreasing())
            trace.events.push_back("iteration " + std::to_string(k) +
                                   ": band means not strictly decreasing");
        trace.records.back().energy_after_params =
            removed ? kNaN : energy_gn(chain, pc, mu, f);

        NestedChain next = gn_fixed_c_minimize(f, pc, mu, &chain);
        double guard = removed ? kInf : chain_sym_diff_sq(chain, next);
        ++k;
        trace.records.push_back({k, c, interior_areas(next), guard,
                                 energy_gn(chain, pc, mu, f), energy_gn(next, pc, mu, f),
                                 kNaN});
        chain = std::move(next);
        if (guard <= stop.eps_tol) {
            trace.stop = StopReason::converged;
            return {chain, pc, trace};
        }
    }
    trace.stop = StopReason::max_iters;
    return {chain, PhaseConstants{c, {}}, trace};
}

NestedChain trof_levels(const PcrImage& w, std::span<const double> taus, bool strict) {
    return level_chain(w, taus, strict);
}

TrofResult trof_segment(const PcrImage& f, double lambda, std::vector<double> init_tau,
                        const StoppingRule& stop, TauUpdate mode, bool strict_threshold) {
    stop.validate();
    require(lambda > 0, "lambda must be positive");
    require(!init_tau.empty(), "need at least one threshold");
    for (size_t i = 0; i + 1 < init_tau.size(); ++i)
        require(init_tau[i] > init_tau[i + 1], "thresholds must be strictly decreasing");

    PcrImage w = solve_arof_exact(f, lambda);
    std::vector<double> tau = std::move(init_tau);
    NestedChain chain = trof_levels(w, tau, strict_threshold);
    IterationTrace trace;
    trace.records.push_back({0, tau, interior_areas(chain), kInf, kNaN,
                             energy_trofn(chain, tau, lambda, f), kNaN});

    int k = 0;
    while (k < stop.max_iters) {
        int n = static_cast<int>(tau.size()) + 1;
        // Threshold update; an empty band drops its threshold.
        std::vector<double> next_tau(tau.size());
        bool removed = false;
        for (int i = 1; i < n && !removed; ++i) {
            if (mode == TauUpdate::literal) {
                CellSet band = chain.level(i + 1).set_minus(chain.level(i));
                if (band.count() == 0) {
                    tau.erase(tau.begin() + (i - 1));
                    trace.events.push_back("iteration " + std::to_string(k) + ": threshold " +
                                           std::to_string(i) + " removed (empty band)");
                    removed = true;
                    break;
                }
                next_tau[i - 1] = region_mean(f, band);
            } else {
                CellSet upper = chain.band(i), lower = chain.band(i + 1);
                if (upper.count() == 0 || lower.count() == 0) {
                    tau.erase(tau.begin() + (i - 1));
                    trace.events.push_back("iteration " + std::to_string(k) + ": threshold " +
                                           std::to_string(i) + " removed (empty band)");
                    removed = true;
                    break;
                }
                next_tau[i - 1] = 0.5 * (region_mean(f, upper) + region_mean(f, lower));
            }
        }
        if (!removed) {
            // Drop thresholds that lost strict ordering.
            tau = next_tau;
            for (size_t i = 0; i + 1 < tau.size();) {
                if (!(tau[i] > tau[i + 1])) {
                    tau.erase(tau.begin() + i + 1);
                    trace.events.push_back("iteration " + std::to_string(k) +
                                           ": threshold ordering lost, merged phases");
                    removed = true;
                } else {
                    ++i;
                }
            }
        }
        if (tau.empty()) {
            trace.stop = StopReason::phase_collapsed;
            return {chain, tau, trace};
        }

        NestedChain next = trof_levels(w, tau, strict_threshold);
        double guard = chain_sym_diff_sq(chain, next);
        double before = removed ? kNaN : energy_trofn(chain, tau, lambda, f);
        if (!removed)
            trace.records.back().energy_after_params = energy_trofn(chain, tau, lambda, f);
        ++k;
        trace.records.push_back({k, tau, interior_areas(next), guard, before,
                                 energy_trofn(next, tau, lambda, f), kNaN});
        chain = std::move(next);
        if (guard <= stop.eps_tol) {
            trace.stop = StopReason::converged;
            return {chain, tau, trace};
        }
    }
    trace.stop = StopReason::max_iters;
    return {chain, tau, trace};
}

// ---------------------------------------------------------------------------
// Raster counterparts.

namespace {

std::vector<bool> raster_threshold(const Raster& u, double tau, bool strict) {
    std::vector<bool> m(u.pixel_count());
    for (int i = 0; i < u.pixel_count(); ++i)
        m[i] = strict ? u.pixels[i] > tau : u.pixels[i] >= tau;
    return m;
}

double mask_area(const Raster& f, const std::vector<bool>& m) {
    double a = 0;
    for (bool b : m)
        if (b) a += f.pitch * f.pitch;
    return a;
}

double mask_mean(const Raster& f, const std::vector<bool>& m, bool invert = false) {
    double a = 0, s = 0;
    for (int i = 0; i < f.pixel_count(); ++i)
        if (m[i] != invert) {
            a += 1;
            s += f.pixels[i];
        }
    if (a == 0) throw EmptyPhaseError(invert ? 2 : 1);
    return s / a;
}

double mask_sym_diff_area(const Raster& f, const std::vector<bool>& a,
                          const std::vector<bool>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) s += f.pitch * f.pitch;
    return s;
}

// Two-phase energy of a pixel mask: indicator TV plus weighted fidelity.
double mask_energy_acv(const Raster& f, const std::vector<bool>& m, double c1, double c2,
                       double mu) {
    double tv = 0;
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            int i = y * f.width + x;
            if (x + 1 < f.width && m[i] != m[i + 1]) tv += f.pitch;
            if (y + 1 < f.height && m[i] != m[i + f.width]) tv += f.pitch;
        }
    double fid = 0;
    for (int i = 0; i < f.pixel_count(); ++i) {
        double c = m[i] ? c1 : c2;
        fid += (c - f.pixels[i]) * (c - f.pixels[i]);
    }
    return tv + mu * f.pitch * f.pitch * fid;
}

} // namespace

RasterSegmentation2Result acv_segment(const Raster& f, double mu, const PhaseConstants& init,
                                      const StoppingRule& stop, const SolverConfig& solver,
                                      bool strict_threshold) {
    stop.validate();
    require(init.c.size() == 2, "two initial constants required");
    double c1 = init.c[0], c2 = init.c[1];
    require(c1 > c2, "initial constants must satisfy c1 > c2");
    require(mu > 0, "mu must be positive");

    IterationTrace trace;
    auto solve_step = [&](double a, double b) {
        SolverConfig cfg = solver;
        cfg.lambda = acv_lambda(mu, a, b);
        auto [w, st] = solve_arof_raster(f, cfg);
        return raster_threshold(w, 0.5 * (a + b), strict_threshold);
    };

    std::vector<bool> mask = solve_step(c1, c2);
    trace.records.push_back({0,
                             {c1, c2},
                             {mask_area(f, mask)},
                             kInf,
                             kNaN,
                             mask_energy_acv(f, mask, c1, c2, mu),
                             kNaN});
    int k = 0;
    while (k < stop.max_iters) {
        double n1, n2;
        try {
            n1 = mask_mean(f, mask);
            n2 = mask_mean(f, mask, true);
        } catch (const EmptyPhaseError& e) {
            trace.events.push_back("phase " + std::to_string(e.phase) + " collapsed");
            trace.stop = StopReason::phase_collapsed;
            return {mask, c1, c2, trace};
        }
        if (!(n1 > n2)) {
            trace.events.push_back("constant ordering lost");
            trace.stop = StopReason::phase_collapsed;
            return {mask, c1, c2, trace};
        }
        c1 = n1;
        c2 = n2;
        trace.records.back().energy_after_params = mask_energy_acv(f, mask, c1, c2, mu);

        std::vector<bool> next = solve_step(c1, c2);
        double guard = mask_sym_diff_area(f, mask, next);
        guard *= guard;
        ++k;
        trace.records.push_back({k,
                                 {c1, c2},
                                 {mask_area(f, next)},
                                 guard,
                                 mask_energy_acv(f, mask, c1, c2, mu),
                                 mask_energy_acv(f, next, c1, c2, mu),
                                 kNaN});
        mask = std::move(next);
        if (guard <= stop.eps_tol) {
            trace.stop = StopReason::converged;
            return {mask, c1, c2, trace};
        }
    }
    trace.stop = StopReason::max_iters;
    return {mask, c1, c2, trace};
}

RasterTrofResult trof_segment(const Raster& f, double lambda, std::vector<double> init_tau,
                              const StoppingRule& stop, const SolverConfig& solver,
                              TauUpdate mode, bool strict_threshold) {
    stop.validate();
    require(lambda > 0, "lambda must be positive");
    require(!init_tau.empty(), "need at least one threshold");
    for (size_t i = 0; i + 1 < init_tau.size(); ++i)
        require(init_tau[i] > init_tau[i + 1], "thresholds must be strictly decreasing");

    SolverConfig cfg = solver;
    cfg.lambda = lambda;
    auto [w, st] = solve_arof_raster(f, cfg);

    std::vector<double> tau = std::move(init_tau);
    auto levels_of = [&](const std::vector<double>& ts) {
        std::vector<std::vector<bool>> ls;
        for (double t : ts) ls.push_back(raster_threshold(w, t, strict_threshold));
        return ls;
    };
    std::vector<std::vector<bool>> levels = levels_of(tau);

    IterationTrace trace;
    auto areas = [&](const std::vector<std::vector<bool>>& ls) {
        std::vector<double> a;
        for (const auto& m : ls) a.push_back(mask_area(f, m));
        return a;
    };
    trace.records.push_back({0, tau, areas(levels), kInf, kNaN, kNaN, kNaN});

    int k = 0;
    while (k < stop.max_iters) {
        int n = static_cast<int>(tau.size()) + 1;
        std::vector<double> next_tau(tau.size());
        bool removed = false;
        for (int i = 1; i < n && !removed; ++i) {
            // Band S_{i+1} \ S_i; S_n is the whole image.
            const std::vector<bool>& inner = levels[i - 1];
            double a = 0, s = 0;
            for (int px = 0; px < f.pixel_count(); ++px) {
                bool in_outer = (i == n - 1) ? true : levels[i][px];
                if (in_outer && !inner[px]) {
                    a += 1;
                    s += f.pixels[px];
                }
            }
            if (mode == TauUpdate::midpoint) {
                double ua = 0, us = 0;
                for (int px = 0; px < f.pixel_count(); ++px) {
                    bool in_upper = inner[px] && (i == 1 || !levels[i - 2][px]);
                    if (in_upper) {
                        ua += 1;
                        us += f.pixels[px];
                    }
                }
                if (a == 0 || ua == 0) {
                    tau.erase(tau.begin() + (i - 1));
                    removed = true;
                    break;
                }
                next_tau[i - 1] = 0.5 * (us / ua + s / a);
            } else {
                if (a == 0) {
                    tau.erase(tau.begin() + (i - 1));
                    removed = true;
                    break;
                }
                next_tau[i - 1] = s / a;
            }
        }
        if (removed)
            trace.events.push_back("iteration " + std::to_string(k) +
                                   ": threshold removed (empty band)");
        else {
            tau = next_tau;
            for (size_t i = 0; i + 1 < tau.size();) {
                if (!(tau[i] > tau[i + 1])) {
                    tau.erase(tau.begin() + i + 1);
                    trace.events.push_back("iteration " + std::to_string(k) +
                                           ": threshold ordering lost, merged phases");
                } else {
                    ++i;
                }
            }
        }
        if (tau.empty()) {
            trace.stop = StopReason::phase_collapsed;
            return {levels, tau, trace};
        }

        std::vector<std::vector<bool>> next = levels_of(tau);
        double guard = kInf;
        if (next.size() == levels.size()) {
            guard = 0;
            for (size_t i = 0; i < next.size(); ++i) {
                double d = mask_sym_diff_area(f, levels[i], next[i]);
                guard += d * d;
            }
        }
        ++k;
        trace.records.push_back({k, tau, areas(next), guard, kNaN, kNaN, kNaN});
        levels = std::move(next);
        if (guard <= stop.eps_tol) {
            trace.stop = StopReason::converged;
            return {levels, tau, trace};
        }
    }
    trace.stop = StopReason::max_iters;
    return {levels, tau, trace};
}

} // namespace anicv
