// Acceptance suite: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "anicv/algorithms.hpp"
#include "anicv/energy.hpp"
#include "anicv/fcm.hpp"
#include "anicv/graphcut.hpp"
#include "anicv/oracle.hpp"
#include "anicv/pcr_io.hpp"
#include "anicv/pd.hpp"

using namespace anicv;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool pass;
    std::string detail;
    double seconds;
};

std::vector<Criterion> results;

template <typename Fn>
void criterion(int id, const std::string& name, double time_limit_s, Fn&& fn) {
    auto t0 = Clock::now();
    std::ostringstream detail;
    bool pass = true;
    try {
        pass = fn(detail);
    } catch (const std::exception& e) {
        pass = false;
        detail << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (secs >= time_limit_s) {
        pass = false;
        detail << (detail.str().empty() ? "" : "; ") << "time limit " << time_limit_s
               << " s exceeded";
    }
    results.push_back({id, name, pass, detail.str(), secs});
}

PcrImage break_datum() {
    Rect dom{-1, -1, 1, 1};
    std::vector<Rect> rects = {{-0.5, -0.5, 0.5, 0.5}, {0.25, 0.5, 0.5, 0.75}};
    GridPtr g = build_grid(dom, rects);
    std::vector<double> ones = {1.0, 1.0};
    return PcrImage::from_rects(g, 0.0, rects, ones);
}

PcrImage random_pcr(std::mt19937_64& rng, int max_segments, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    auto lines = [&](int segs) {
        std::vector<double> ls = {lo, hi};
        while (static_cast<int>(ls.size()) < segs + 1) {
            double v = lo + (hi - lo) * d(rng);
            if (v > lo && v < hi) ls.push_back(v);
        }
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        return ls;
    };
    int sx = 2 + static_cast<int>(rng() % (max_segments - 1));
    int sy = 2 + static_cast<int>(rng() % (max_segments - 1));
    GridPtr g = make_grid(lines(sx), lines(sy));
    std::vector<double> vals(g->cell_count());
    std::uniform_real_distribution<double> v01(0.0, 1.0);
    for (double& v : vals) v = v01(rng);
    return PcrImage(g, vals);
}

bool criterion1(std::ostringstream& detail) {
    PcrImage f = break_datum();
    GridPtr g = f.grid();
    CellSet a1 = CellSet::from_rect(g, {-0.5, -0.5, 0.5, 0.5});
    CellSet a2 = CellSet::from_rect(g, {0.25, 0.5, 0.5, 0.75});

    PcrImage w = solve_arof_exact(f, 16.0);
    double worst = 0;
    for (int i = 0; i < g->cell_count(); ++i) {
        double expected = a1.contains(i) ? 0.75 : a2.contains(i) ? 0.5 : 9.0 / 94.0;
        worst = std::max(worst, std::abs(w.value(i) - expected));
    }
    bool values_ok = worst <= 1e-9;

    bool threshold_ok = threshold(w, 49.0 / 96.0) == a1;

    auto bf = brute_force_binary(f, BinaryEnergySpec::refit(768.0 / 47));
    double stated = energy_acv(a1, 1.0, 1.0 / 48, 768.0 / 47, f);
    bool minimality_ok =
        std::abs(bf.energy - 5.0) <= 1e-9 && std::abs(stated - bf.energy) <= 1e-9;

    detail << "region values max err " << worst << (values_ok ? " (ok)" : " (FAIL)")
           << "; threshold " << (threshold_ok ? "recovers A1" : "FAILS");
    if (!minimality_ok)
        detail << "; exhaustive re-fit minimum is " << format_double(bf.energy)
               << " (stated triple: " << format_double(stated)
               << ", expected minimum 5) -- stated claim does not hold";
    return values_ok && threshold_ok && minimality_ok;
}

bool criterion2(std::ostringstream& detail) {
    CalibrableConfig cfg;
    cfg.domain_half_side = 38;
    cfg.lambda = 10;
    cfg.components = {{0, -19, 1, 1.0}, {0, 0, 0.5, 1.0}, {0, 19, 2, 0.5}};
    PcrImage w = calibrable_solution(cfg);
    GridPtr g = w.grid();
    std::vector<Rect> rects = {cfg.square_rect(0), cfg.square_rect(1), cfg.square_rect(2)};
    std::vector<double> alphas = {1.0, 1.0, 0.5};
    PcrImage f = PcrImage::from_rects(g, 0.0, rects, alphas);
    CellSet c1 = CellSet::from_rect(g, rects[0]);
    CellSet c2 = CellSet::from_rect(g, rects[1]);
    CellSet c3 = CellSet::from_rect(g, rects[2]);
    CellSet a = c1.set_union(c2).set_union(c3);

    std::vector<double> c = {1.0, 9.0 / 17, 0.0};
    std::vector<double> mu = {85.0 / 8, 1445.0 / 72, 85.0 / 9};
    std::vector<CellSet> level = {c1, c2.set_union(c3), a.complement()};
    std::vector<CellSet> swapped = {c1.set_union(c2), c3, a.complement()};
    double e_level = energy_cvn(level, c, mu, f);
    double e_swapped = energy_cvn(swapped, c, mu, f);

    bool ok_level = std::abs(e_level - 733.0 / 18) <= 1e-9;
    bool ok_swapped = std::abs(e_swapped - 725.0 / 18) <= 1e-9;
    bool ok_strict = e_swapped < e_level;
    detail << "energies " << format_double(e_level) << " vs " << format_double(e_swapped);
    return ok_level && ok_swapped && ok_strict;
}

bool criterion3(std::ostringstream& detail) {
    std::mt19937_64 rng(20240311);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0;
    for (int t = 0; t < 20; ++t) {
        CalibrableConfig cfg;
        int m = 1 + static_cast<int>(rng() % 3);
        double hs[] = {0.5, 1.0, 2.0};
        double x = 0, hmax = 0;
        for (int i = 0; i < m; ++i) {
            double h = hs[rng() % 3];
            double alpha = 0.3 + 0.7 * u(rng);
            if (i > 0) x += cfg.components.back().half_side + 8 * 2.0 + 2 + h;
            cfg.components.push_back({x, 0, h, alpha});
            hmax = std::max(hmax, h);
        }
        cfg.domain_half_side = std::ceil(x + hmax + 8 * hmax + 2);
        cfg.lambda = 0; // placeholder to compute the bound
        cfg.lambda = cfg.lambda_bound() * (1.05 + u(rng));
        cfg.validate();

        PcrImage w_closed = calibrable_solution(cfg);
        std::vector<Rect> rects;
        std::vector<double> alphas;
        for (int i = 0; i < m; ++i) {
            rects.push_back(cfg.square_rect(i));
            alphas.push_back(cfg.components[i].alpha);
        }
        PcrImage f = PcrImage::from_rects(w_closed.grid(), 0.0, rects, alphas);
        PcrImage w_solver = solve_arof_exact(f, cfg.lambda);
        for (int i = 0; i < f.grid()->cell_count(); ++i)
            if (std::abs(w_closed.value(i) - w_solver.value(i)) > 1e-9) {
                ++bad;
                break;
            }
    }
    detail << bad << "/20 configs mismatched";
    return bad == 0;
}

bool criterion4(std::ostringstream& detail) {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0;
    for (int t = 0; t < 200; ++t) {
        PcrImage f = random_pcr(rng, 4);
        double c2 = 0.45 * u(rng), c1 = 0.55 + 0.45 * u(rng), mu = 0.5 + 8 * u(rng);
        PcrImage w = solve_arof_exact(f, acv_lambda(mu, c1, c2));
        CellSet s = acv_from_arof(w, c1, c2);
        auto bf = brute_force_binary(f, BinaryEnergySpec::fixed(c1, c2, mu));
        if (std::abs(energy_acv(s, c1, c2, mu, f) - bf.energy) > 1e-9) ++bad;
    }
    detail << bad << "/200 instances missed the exhaustive minimum";
    return bad == 0;
}

bool criterion5(std::ostringstream& detail) {
    std::mt19937_64 rng(515151);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0, removals = 0;
    for (int t = 0; t < 100; ++t) {
        PcrImage f = random_pcr(rng, 5);
        int n = 3 + static_cast<int>(rng() % 2);
        std::vector<double> c(n);
        for (double& x : c) x = u(rng);
        std::sort(c.rbegin(), c.rend());
        bool distinct = true;
        for (int i = 0; i + 1 < n; ++i)
            if (!(c[i] > c[i + 1] + 1e-6)) distinct = false;
        if (!distinct) {
            --t;
            continue;
        }
        double mu = 0.5 + 10 * u(rng);
        PhaseConstants pc{c, {}};
        NestedChain chain = gn_fixed_c_minimize(f, pc, mu);
        bool empty_band = false;
        for (int i = 1; i <= n; ++i)
            if (chain.band(i).count() == 0) empty_band = true;
        if (empty_band) {
            ++removals; // phase-removal event
            continue;
        }
        PhaseConstants means = update_constants(chain, f);
        if (!means.strictly_decreasing()) ++violations;
    }
    detail << violations << " ordering violations, " << removals << " phase removals";
    return violations == 0;
}

bool criterion6(std::ostringstream& detail) {
    std::mt19937_64 rng(616161);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad_level = 0, bad_sum = 0;
    for (int t = 0; t < 100; ++t) {
        PcrImage f = random_pcr(rng, 5);
        double lambda = 1 + 15 * u(rng);
        int n = 3 + static_cast<int>(rng() % 2);
        std::vector<double> tau(n - 1);
        for (double& x : tau) x = u(rng);
        std::sort(tau.rbegin(), tau.rend());
        bool distinct = true;
        for (size_t i = 0; i + 1 < tau.size(); ++i)
            if (!(tau[i] > tau[i + 1] + 1e-6)) distinct = false;
        if (!distinct) {
            --t;
            continue;
        }

        PcrImage w = solve_arof_exact(f, lambda);
        NestedChain chain = trof_levels(w, tau);
        double sum = 0;
        for (int i = 1; i < n; ++i) {
            auto cut = min_cut_binary(parametric_cut_problem(f, lambda, tau[i - 1]));
            NestedChain two(f.grid(), {CellSet::empty_set(f.grid()), chain.level(i),
                                       CellSet::full_set(f.grid())});
            std::vector<double> ti = {tau[i - 1]};
            double e_level = energy_trofn(two, ti, lambda, f);
            if (std::abs(e_level - cut.energy) > 1e-9) ++bad_level;
            sum += e_level;
        }
        if (std::abs(energy_trofn(chain, tau, lambda, f) - sum) > 1e-12) ++bad_sum;
    }
    detail << bad_level << " level-energy mismatches, " << bad_sum << " sum-identity failures";
    return bad_level == 0 && bad_sum == 0;
}

bool criterion7(std::ostringstream& detail) {
    std::mt19937_64 rng(717171);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_l2 = 0, worst_energy = 0;
    for (int t = 0; t < 20; ++t) {
        // Grid lines on multiples of 1/16 so a 256-wide raster is cell-aligned.
        std::vector<double> xs = {0.0, 1.0}, ys = {0.0, 1.0};
        for (int k = 1; k < 16; ++k) {
            if (u(rng) < 0.4) xs.push_back(k / 16.0);
            if (u(rng) < 0.4) ys.push_back(k / 16.0);
        }
        std::sort(xs.begin(), xs.end());
        std::sort(ys.begin(), ys.end());
        GridPtr g = make_grid(xs, ys);
        std::vector<double> vals(g->cell_count());
        for (double& v : vals) v = u(rng);
        PcrImage fp(g, vals);
        double lambda = 8 + 16 * u(rng);

        PcrImage wp = solve_arof_exact(fp, lambda);
        Raster f = rasterize(fp, 256, 256);
        Raster w_exact = rasterize(wp, 256, 256);

        SolverConfig cfg;
        cfg.lambda = lambda;
        cfg.gap_tol = 1e-8;
        cfg.max_iters = 20000;
        auto [uu, stats] = solve_arof_raster(f, cfg);

        double num = 0, den = 0;
        for (int i = 0; i < f.pixel_count(); ++i) {
            num += (uu.pixels[i] - w_exact.pixels[i]) * (uu.pixels[i] - w_exact.pixels[i]);
            den += w_exact.pixels[i] * w_exact.pixels[i];
        }
        worst_l2 = std::max(worst_l2, std::sqrt(num / den));
        double e_it = energy_arof_raster(uu, f, lambda);
        double e_ex = energy_arof_raster(w_exact, f, lambda);
        worst_energy = std::max(worst_energy, std::abs(e_it - e_ex) / e_ex);
    }
    detail << "worst relative L2 " << worst_l2 << ", worst relative energy " << worst_energy;
    return worst_l2 <= 1e-3 && worst_energy <= 1e-4;
}

bool criterion8(std::ostringstream& detail) {
    std::mt19937_64 rng(818181);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    StoppingRule stop{1e-3, 200};
    int non_monotone = 0, non_terminated = 0, runs = 0;

    auto check_trace = [&](const IterationTrace& trace, bool param_steps) {
        for (const IterationRecord& r : trace.records) {
            if (std::isfinite(r.energy_before_sets) &&
                r.energy_after_sets > r.energy_before_sets + 1e-9)
                ++non_monotone;
            if (param_steps && std::isfinite(r.energy_after_params) &&
                r.energy_after_params > r.energy_after_sets + 1e-9)
                ++non_monotone;
        }
        if (trace.stop == StopReason::max_iters) ++non_terminated;
        if (trace.stop == StopReason::converged &&
            trace.records.back().sym_diff_sq > stop.eps_tol)
            ++non_monotone;
    };

    for (int t = 0; t < 17; ++t) { // two-phase alternation
        PcrImage f = random_pcr(rng, 5);
        double mu = 1 + 19 * u(rng);
        auto init = fcm_init(f, 2);
        auto res = acv_segment(f, mu, init.constants, stop);
        check_trace(res.trace, true);
        ++runs;
    }
    for (int t = 0; t < 17; ++t) { // nested multiphase alternation
        PcrImage f = random_pcr(rng, 5);
        if (f.grid()->cell_count() < 3) {
            --t;
            continue;
        }
        double mu = 1 + 19 * u(rng);
        auto init = fcm_init(f, 3);
        auto res = gn_alternate(f, mu, init.constants, stop);
        check_trace(res.trace, true);
        ++runs;
    }
    for (int t = 0; t < 16; ++t) { // truncated multiphase
        PcrImage f = random_pcr(rng, 5);
        if (f.grid()->cell_count() < 3) {
            --t;
            continue;
        }
        double lambda = 1 + 15 * u(rng);
        auto init = fcm_init(f, 3);
        auto res = trof_segment(f, lambda, init.constants.tau, stop);
        check_trace(res.trace, false); // the threshold update is not a descent step
        ++runs;
    }
    detail << runs << " runs, " << non_monotone << " monotonicity violations, "
           << non_terminated << " hit the iteration cap";
    return non_monotone == 0 && non_terminated == 0;
}

} // namespace

int main() {
    criterion(1, "worked example: exact values, threshold, exhaustive minimality", 5.0,
              criterion1);
    criterion(2, "three-phase counterexample energies", 1.0, criterion2);
    criterion(3, "closed form vs exact solver on admissible configs", 30.0, criterion3);
    criterion(4, "midpoint threshold attains the exhaustive two-phase minimum", 60.0,
              criterion4);
    criterion(5, "band means of level-wise optima are ordered", 60.0, criterion5);
    criterion(6, "level sets solve the truncated objectives; the sum decouples", 60.0,
              criterion6);
    criterion(7, "iterative raster solver tracks the exact one at 256^2", 120.0, criterion7);
    criterion(8, "alternating algorithms descend and stop in time", 600.0, criterion8);

    bool all = true;
    for (const Criterion& c : results) {
        std::printf("criterion %d: %s  [%.2f s]  %s%s%s\n", c.id,
                    c.pass ? "PASS" : "FAIL", c.seconds, c.name.c_str(),
                    c.detail.empty() ? "" : " -- ", c.detail.c_str());
        all = all && c.pass;
    }
    if (!all) {
        std::printf("acceptance: FAILURES present\n");
        return 1;
    }
    std::printf("acceptance: all criteria passed\n");
    return 0;
}
