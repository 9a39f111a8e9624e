#include "anicv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anicv/energy.hpp"
#include "anicv/graphcut.hpp"
#include "anicv/pcr_io.hpp"

namespace anicv {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string set_to_string(const CellSet& s) {
    std::string out;
    for (int i = 0; i < s.grid()->cell_count(); ++i) out += s.contains(i) ? '1' : '0';
    return out;
}

} // namespace

BinaryEnergySpec BinaryEnergySpec::fixed(double c1, double c2, double mu) {
    return {Kind::fixed_constants, c1, c2, mu, 0, 0};
}
BinaryEnergySpec BinaryEnergySpec::refit(double mu) {
    return {Kind::refit_constants, 0, 0, mu, 0, 0};
}
BinaryEnergySpec BinaryEnergySpec::trof(double tau, double lambda) {
    return {Kind::trof2, 0, 0, 0, tau, lambda};
}

BinaryBruteForceResult brute_force_binary(const PcrImage& f, const BinaryEnergySpec& spec) {
    const Grid& g = *f.grid();
    int n = g.cell_count();
    require(n <= 24, "brute force capped at 24 cells");

    std::vector<double> area(n), fa(n), f2a(n);
    for (int i = 0; i < n; ++i) {
        area[i] = g.cell_area(i);
        fa[i] = area[i] * f.value(i);
        f2a[i] = area[i] * f.value(i) * f.value(i);
    }
    double area_total = 0, fa_total = 0, f2a_total = 0;
    for (int i = 0; i < n; ++i) {
        area_total += area[i];
        fa_total += fa[i];
        f2a_total += f2a[i];
    }
    const auto& edges = g.interior_edges();

    auto evaluate = [&](std::uint32_t mask) {
        double per = 0;
        for (const Grid::Edge& e : edges)
            if (((mask >> e.a) & 1) != ((mask >> e.b) & 1)) per += e.len;
        double a_in = 0, fa_in = 0, f2a_in = 0;
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1) {
                a_in += area[i];
                fa_in += fa[i];
                f2a_in += f2a[i];
            }
        double a_out = area_total - a_in, fa_out = fa_total - fa_in,
               f2a_out = f2a_total - f2a_in;
        switch (spec.kind) {
            case BinaryEnergySpec::Kind::fixed_constants: {
                double fid_in = f2a_in - 2 * spec.c1 * fa_in + spec.c1 * spec.c1 * a_in;
                double fid_out = f2a_out - 2 * spec.c2 * fa_out + spec.c2 * spec.c2 * a_out;
                return per + spec.mu * (fid_in + fid_out);
            }
            case BinaryEnergySpec::Kind::refit_constants: {
                double fid_in = a_in > 0 ? f2a_in - fa_in * fa_in / a_in : 0.0;
                double fid_out = a_out > 0 ? f2a_out - fa_out * fa_out / a_out : 0.0;
                return per + spec.mu * (fid_in + fid_out);
            }
            case BinaryEnergySpec::Kind::trof2:
                return per + spec.lambda * (spec.tau * a_in - fa_in);
        }
        return 0.0;
    };

    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
        best = std::min(best, evaluate(mask));

    BinaryBruteForceResult res{CellSet::empty_set(f.grid()), best, {}};
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
        if (evaluate(mask) <= best + 1e-12) {
            std::vector<bool> in(n);
            for (int i = 0; i < n; ++i) in[i] = (mask >> i) & 1;
            res.ties.push_back(std::move(in));
        }
    res.set = CellSet(f.grid(), *std::min_element(res.ties.begin(), res.ties.end()));
    return res;
}

std::pair<NestedChain, double> brute_force_chain(const PcrImage& f, int n,
                                                 const PhaseConstants& c, double mu) {
    const Grid& g = *f.grid();
    int cells = g.cell_count();
    require(n >= 2, "need at least two phases");
    require(c.phases() == n, "one constant per phase");
    require(std::pow(static_cast<double>(n), cells) <= 1e7, "labelling space exceeds 1e7");

    const auto& edges = g.interior_edges();
    std::vector<double> fid(static_cast<size_t>(cells) * n);
    for (int i = 0; i < cells; ++i)
        for (int l = 0; l < n; ++l)
            fid[static_cast<size_t>(i) * n + l] =
                mu * g.cell_area(i) * (c.c[l] - f.value(i)) * (c.c[l] - f.value(i));

    // The nested energy counts each inter-level edge once, so it reduces to a
    // Potts functional over labellings.
    std::vector<int> label(cells, 0), best_label(cells, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        double e = 0;
        for (const Grid::Edge& ed : edges)
            if (label[ed.a] != label[ed.b]) e += ed.len;
        for (int i = 0; i < cells; ++i) e += fid[static_cast<size_t>(i) * n + label[i]];
        if (e < best) {
            best = e;
            best_label = label;
        }
        int pos = 0;
        while (pos < cells && ++label[pos] == n) label[pos++] = 0;
        if (pos == cells) break;
    }

    std::vector<CellSet> levels;
    levels.push_back(CellSet::empty_set(f.grid()));
    for (int l = 0; l + 1 < n; ++l) {
        std::vector<bool> in(cells);
        for (int i = 0; i < cells; ++i) in[i] = best_label[i] <= l;
        levels.emplace_back(f.grid(), std::move(in));
    }
    levels.push_back(CellSet::full_set(f.grid()));
    NestedChain chain(f.grid(), std::move(levels));
    return {chain, energy_gn(chain, c, mu, f)};
}

Rect CalibrableConfig::domain() const {
    double r = domain_half_side;
    return {-r, -r, r, r};
}

Rect CalibrableConfig::square_rect(int i) const {
    const Square& s = components[i];
    return {s.cx - s.half_side, s.cy - s.half_side, s.cx + s.half_side, s.cy + s.half_side};
}

double CalibrableConfig::distance_margin(int i) const {
    const Square& a = components[i];
    double dist = domain_half_side - a.half_side - std::max(std::abs(a.cx), std::abs(a.cy));
    for (size_t j = 0; j < components.size(); ++j) {
        if (static_cast<int>(j) == i) continue;
        const Square& b = components[j];
        double dx = std::max(0.0, std::abs(a.cx - b.cx) - (a.half_side + b.half_side));
        double dy = std::max(0.0, std::abs(a.cy - b.cy) - (a.half_side + b.half_side));
        dist = std::min(dist, dx + dy);
    }
    return dist - 8.0 * a.half_side; // Per1 of an axis-aligned square of half-side h is 8h
}

double CalibrableConfig::lambda_bound() const {
    double per_a = 0, area_a = 0;
    for (const Square& s : components) {
        per_a += 8.0 * s.half_side;
        area_a += 4.0 * s.half_side * s.half_side;
    }
    double outside = per_a / (domain().area() - area_a);
    double bound = 0;
    for (const Square& s : components)
        bound = std::max(bound, (outside + 2.0 / s.half_side) / s.alpha);
    return bound;
}

void CalibrableConfig::validate() const {
    require(domain_half_side > 0, "domain half-side must be positive");
    require(!components.empty(), "need at least one component");
    for (const Square& s : components) {
        require(s.half_side > 0, "component half-side must be positive");
        require(s.alpha > 0, "component height must be positive");
    }
    for (size_t i = 0; i < components.size(); ++i) {
        double m = distance_margin(static_cast<int>(i));
        if (!(m > 0)) {
            std::ostringstream os;
            os << "distance condition violated for component " << i << " (margin "
               << format_double(m) << ")";
            throw std::invalid_argument(os.str());
        }
    }
    double bound = lambda_bound();
    if (!(lambda >= bound)) {
        std::ostringstream os;
        os << "lambda condition violated (lambda " << format_double(lambda) << " < bound "
           << format_double(bound) << ")";
        throw std::invalid_argument(os.str());
    }
}

PcrImage calibrable_solution(const CalibrableConfig& cfg) {
    cfg.validate();
    std::vector<Rect> rects;
    for (size_t i = 0; i < cfg.components.size(); ++i) rects.push_back(cfg.square_rect(i));
    GridPtr g = build_grid(cfg.domain(), rects);

    double per_a = 0, area_a = 0;
    for (const auto& s : cfg.components) {
        per_a += 8.0 * s.half_side;
        area_a += 4.0 * s.half_side * s.half_side;
    }
    double outside = per_a / (cfg.lambda * (cfg.domain().area() - area_a));
    std::vector<double> values;
    for (const auto& s : cfg.components)
        values.push_back(s.alpha - 2.0 / (cfg.lambda * s.half_side));
    return PcrImage::from_rects(g, outside, rects, values);
}

bool VerifyReport::all_pass() const {
    for (const CheckResult& c : checks)
        if (!c.informational && !c.pass) return false;
    return true;
}

namespace {

CheckResult value_check(std::string name, double expected, double actual, double tol,
                        bool informational = false) {
    CheckResult c;
    c.name = std::move(name);
    c.pass = std::abs(expected - actual) <= tol;
    c.informational = informational;
    c.expected = format_double(expected);
    c.actual = format_double(actual);
    return c;
}

} // namespace

VerifyReport verify_example_break() {
    VerifyReport rep;
    rep.title = "two-phase worked example";

    Rect dom{-1, -1, 1, 1};
    Rect a1{-0.5, -0.5, 0.5, 0.5}, a2{0.25, 0.5, 0.5, 0.75};
    std::vector<Rect> rects = {a1, a2};
    GridPtr g = build_grid(dom, rects);
    std::vector<double> ones = {1.0, 1.0};
    PcrImage f = PcrImage::from_rects(g, 0.0, rects, ones);
    CellSet a1_set = CellSet::from_rect(g, a1), a2_set = CellSet::from_rect(g, a2);

    PcrImage w = solve_arof_exact(f, 16.0);
    double max_err = 0;
    for (int i = 0; i < g->cell_count(); ++i) {
        double expected = a1_set.contains(i) ? 0.75 : a2_set.contains(i) ? 0.5 : 9.0 / 94.0;
        max_err = std::max(max_err, std::abs(w.value(i) - expected));
    }
    {
        CheckResult c;
        c.name = "denoiser region values (3/4, 1/2, 9/94) at weight 16";
        c.pass = max_err <= 1e-9;
        c.expected = "max deviation <= 1e-9";
        c.actual = "max deviation " + format_double(max_err);
        rep.checks.push_back(c);
    }

    CellSet thr = threshold(w, 49.0 / 96.0);
    {
        CheckResult c;
        c.name = "midpoint threshold 49/96 recovers the inner square";
        c.pass = thr == a1_set && threshold(w, 49.0 / 96.0, false) == a1_set;
        c.expected = set_to_string(a1_set);
        c.actual = set_to_string(thr);
        rep.checks.push_back(c);
    }

    // Exhaustive minimality at the weight printed in the source example.
    // The search reports the true minimum; the stated triple does not attain
    // it at this weight (see the corrected-weight check below).
    {
        auto bf = brute_force_binary(f, BinaryEnergySpec::refit(768.0 / 47));
        double stated = energy_acv(a1_set, 1.0, 1.0 / 48, 768.0 / 47, f);
        CheckResult c;
        c.name = "exhaustive re-fit minimum at weight 768/47 attained by the inner square";
        c.pass = std::abs(bf.energy - 5.0) <= 1e-9 &&
                 std::abs(stated - bf.energy) <= 1e-9 && bf.set == a1_set;
        c.expected = "minimum 5 at " + set_to_string(a1_set);
        c.actual = "minimum " + format_double(bf.energy) + " at " + set_to_string(bf.set) +
                   "; stated triple has energy " + format_double(stated);
        rep.checks.push_back(c);
        rep.notes.push_back("weight-768/47 tie class size: " + std::to_string(bf.ties.size()));
    }
    {
        // With the weight matched to the denoising parameter (lambda = 16 and
        // midpoint thresholding correspond to mu = 16 / (2 (c1 - c2)) =
        // 384/47), the thresholded set does attain the exhaustive minimum.
        double mu = 384.0 / 47;
        auto bf = brute_force_binary(f, BinaryEnergySpec::refit(mu));
        double stated = energy_acv(a1_set, 1.0, 1.0 / 48, mu, f);
        bool attained = std::abs(stated - bf.energy) <= 1e-9;
        CheckResult c;
        c.name = "exhaustive re-fit minimum at matched weight 384/47 attained by the "
                 "thresholded set (informational)";
        c.pass = attained && std::abs(bf.energy - 4.5) <= 1e-9;
        c.informational = true;
        c.expected = "minimum 4.5 attained by the inner square";
        c.actual = "minimum " + format_double(bf.energy) + ", inner-square energy " +
                   format_double(stated) + ", ties " + std::to_string(bf.ties.size());
        rep.checks.push_back(c);
    }

    {
        // The boundary of the minimizing set leaves the jump set of the
        // datum: the edge underneath the small bump separates the set from
        // its complement but carries no jump of f.
        bool off_jump_edge = false;
        for (const Grid::Edge& e : g->interior_edges()) {
            bool boundary = a1_set.contains(e.a) != a1_set.contains(e.b);
            bool jump = f.value(e.a) != f.value(e.b);
            if (boundary && !jump) off_jump_edge = true;
        }
        CheckResult c;
        c.name = "minimizer boundary leaves the datum jump set";
        c.pass = off_jump_edge;
        c.expected = "some boundary edge without a datum jump";
        c.actual = off_jump_edge ? "found" : "none found";
        rep.checks.push_back(c);
    }
    return rep;
}

VerifyReport verify_counterexample_3phase() {
    VerifyReport rep;
    rep.title = "three-phase counterexample";

    // Smallest round geometry satisfying the separation and weight margins.
    CalibrableConfig cfg;
    cfg.domain_half_side = 38;
    cfg.lambda = 10;
    cfg.components = {{0, -19, 1, 1.0}, {0, 0, 0.5, 1.0}, {0, 19, 2, 0.5}};
    rep.notes.push_back("domain half-side 38, component offsets 19 (smallest round values "
                        "satisfying the separation and weight conditions)");

    PcrImage w = calibrable_solution(cfg);
    GridPtr g = w.grid();
    std::vector<Rect> rects = {cfg.square_rect(0), cfg.square_rect(1), cfg.square_rect(2)};
    std::vector<double> alphas = {1.0, 1.0, 0.5};
    PcrImage f = PcrImage::from_rects(g, 0.0, rects, alphas);

    CellSet c1s = CellSet::from_rect(g, rects[0]);
    CellSet c2s = CellSet::from_rect(g, rects[1]);
    CellSet c3s = CellSet::from_rect(g, rects[2]);
    CellSet a = c1s.set_union(c2s).set_union(c3s);

    {
        PcrImage ws = solve_arof_exact(f, cfg.lambda);
        double max_err = 0;
        for (int i = 0; i < g->cell_count(); ++i)
            max_err = std::max(max_err, std::abs(ws.value(i) - w.value(i)));
        CheckResult c;
        c.name = "closed-form denoiser matches the exact solver";
        c.pass = max_err <= 1e-9;
        c.expected = "max deviation <= 1e-9";
        c.actual = "max deviation " + format_double(max_err);
        rep.checks.push_back(c);

        double inside_errs =
            std::max({std::abs(region_mean(w, c1s) - 0.8), std::abs(region_mean(w, c2s) - 0.6),
                      std::abs(region_mean(w, c3s) - 0.4)});
        rep.checks.push_back(value_check("denoiser component values (8/10, 6/10, 4/10)", 0.0,
                                         inside_errs, 1e-9));
    }

    double cc1 = region_mean(f, c1s);
    double cc2 = region_mean(f, c2s.set_union(c3s));
    double cc3 = region_mean(f, a.complement());
    rep.checks.push_back(value_check("first region constant", 1.0, cc1, 1e-12));
    rep.checks.push_back(value_check("second region constant 9/17", 9.0 / 17, cc2, 1e-12));
    rep.checks.push_back(value_check("third region constant 0", 0.0, cc3, 1e-12));

    double lam = cfg.lambda;
    double mu1 = lam / (2 * (cc1 - cc2));
    double mu3 = lam / (2 * (cc2 - cc3));
    double mu2 = lam * (cc1 - cc3) / (2 * (cc1 - cc2) * (cc2 - cc3));
    rep.checks.push_back(value_check("weight 85/8", 85.0 / 8, mu1, 1e-9));
    rep.checks.push_back(value_check("weight 1445/72", 1445.0 / 72, mu2, 1e-9));
    rep.checks.push_back(value_check("weight 85/9", 85.0 / 9, mu3, 1e-9));

    std::vector<double> cphase = {cc1, cc2, cc3};
    std::vector<double> mu = {mu1, mu2, mu3};
    std::vector<CellSet> level_partition = {c1s, c2s.set_union(c3s), a.complement()};
    std::vector<CellSet> swapped_partition = {c1s.set_union(c2s), c3s, a.complement()};
    double e_level = energy_cvn(level_partition, cphase, mu, f);
    double e_swapped = energy_cvn(swapped_partition, cphase, mu, f);
    rep.checks.push_back(
        value_check("level-set partition energy 733/18", 733.0 / 18, e_level, 1e-9));
    rep.checks.push_back(
        value_check("swapped partition energy 725/18", 725.0 / 18, e_swapped, 1e-9));
    {
        CheckResult c;
        c.name = "swapped partition has strictly lower energy";
        c.pass = e_swapped < e_level - 1e-9;
        c.expected = format_double(725.0 / 18) + " < " + format_double(733.0 / 18);
        c.actual = format_double(e_swapped) + " vs " + format_double(e_level);
        rep.checks.push_back(c);
    }

    {
        CellSet s1 = threshold(w, 0.5 * (cc1 + cc2));
        CellSet s2 = threshold(w, 0.5 * (cc2 + cc3));
        CheckResult c;
        c.name = "midpoint thresholds of the denoiser give the component sets";
        c.pass = s1 == c1s && s2 == a;
        c.expected = "first square, then the full union";
        c.actual = c.pass ? "matched" : "mismatch";
        rep.checks.push_back(c);
    }

    {
        // Swapping the second and third weights flips the comparison.
        std::vector<double> mu_swapped = {mu1, mu3, mu2};
        double e1 = energy_cvn(level_partition, cphase, mu_swapped, f);
        double e2 = energy_cvn(swapped_partition, cphase, mu_swapped, f);
        CheckResult c;
        c.name = "modified instance (weights 2 and 3 swapped)";
        c.informational = true;
        c.pass = true;
        c.expected = "energies recorded";
        c.actual = "level " + format_double(e1) + ", swapped " + format_double(e2) +
                   (e2 < e1 ? " (still lower)" : " (direction reversed)");
        rep.checks.push_back(c);
    }
    return rep;
}

} // namespace anicv
