#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <random>

#include "anicv/algorithms.hpp"
#include "anicv/energy.hpp"
#include "anicv/fcm.hpp"
#include "anicv/graphcut.hpp"
#include "anicv/oracle.hpp"
#include "anicv/pcr_io.hpp"
#include "anicv/report.hpp"

namespace fs = std::filesystem;
using namespace anicv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerify = 3;

bool is_pcr_path(const std::string& path) {
    return path.size() >= 4 && path.substr(path.size() - 4) == ".pcr";
}

struct Options {
    std::string input, out = ".", labels;
    double lambda = 16.0, mu = 10.0;
    int phases = 2;
    double eps_tol = 1e-3;
    int max_iters = 200;
    std::string solver = "auto";      // exact | iterative | auto
    std::string thresh = "strict";    // strict | inclusive
    std::string tau_update = "literal";
    int trials = 25;
    unsigned long long seed = 1;
    int raster_size = 256;
};

bool use_exact(const Options& o) {
    if (o.solver == "exact") return true;
    if (o.solver == "iterative") return false;
    return is_pcr_path(o.input);
}

SolverConfig iterative_config(const Options& o, double lambda) {
    SolverConfig cfg;
    cfg.lambda = lambda;
    return cfg;
}

Json options_json(const Options& o, std::initializer_list<const char*> keys) {
    Json j;
    for (const char* k : keys) {
        std::string key = k;
        if (key == "input") j["input"] = o.input;
        if (key == "lambda") j["lambda"] = o.lambda;
        if (key == "mu") j["mu"] = o.mu;
        if (key == "phases") j["phases"] = o.phases;
        if (key == "eps_tol") j["eps_tol"] = o.eps_tol;
        if (key == "max_iters") j["max_iters"] = o.max_iters;
        if (key == "solver") j["solver"] = o.solver;
        if (key == "threshold") j["threshold"] = o.thresh;
        if (key == "tau_update") j["tau_update"] = o.tau_update;
        if (key == "trials") j["trials"] = o.trials;
        if (key == "seed") j["seed"] = o.seed;
    }
    return j;
}

// Phase index per cell from a nested chain (1 = innermost level).
std::vector<int> chain_labels(const NestedChain& chain) {
    std::vector<int> lab(chain.grid()->cell_count(), chain.phases());
    for (int i = chain.phases(); i >= 1; --i)
        for (int c = 0; c < chain.grid()->cell_count(); ++c)
            if (chain.level(i).contains(c)) lab[c] = i;
    return lab;
}

Raster label_raster(const PcrImage& source_grid_image, const std::vector<int>& labels, int n,
                    int size) {
    const Grid& g = *source_grid_image.grid();
    Rect dom = g.domain();
    int h = std::max(1, static_cast<int>(std::lround(size * dom.height() / dom.width())));
    Raster r(size, h);
    r.pitch = dom.width() / size;
    for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x) {
            double px = dom.x0 + (x + 0.5) * dom.width() / r.width;
            double py = dom.y1 - (y + 0.5) * dom.height() / r.height;
            int lab = labels[g.cell_at(px, py)];
            r.at(x, y) = n > 1 ? static_cast<double>(n - lab) / (n - 1) : 1.0;
        }
    return r;
}

Raster mask_label_raster(const Raster& f, const std::vector<bool>& mask) {
    Raster r(f.width, f.height, 0.0, f.pitch);
    for (int i = 0; i < f.pixel_count(); ++i) r.pixels[i] = mask[i] ? 1.0 : 0.0;
    return r;
}

// Grayscale overlay: the datum dimmed, grid lines brightened, phase
// boundaries at full white.
Raster overlay_raster(const PcrImage& f, const Raster& labels) {
    const Grid& g = *f.grid();
    Rect dom = g.domain();
    Raster r(labels.width, labels.height, 0.0, labels.pitch);
    double pw = dom.width() / r.width, ph = dom.height() / r.height;
    for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x) {
            double px = dom.x0 + (x + 0.5) * pw;
            double py = dom.y1 - (y + 0.5) * ph;
            r.at(x, y) = 0.7 * f.value(g.cell_at(px, py));
            for (double lx : g.xlines())
                if (std::abs(px - lx) <= 0.5 * pw) r.at(x, y) = 0.85;
            for (double ly : g.ylines())
                if (std::abs(py - ly) <= 0.5 * ph) r.at(x, y) = 0.85;
        }
    for (int y = 0; y < r.height; ++y)
        for (int x = 0; x < r.width; ++x) {
            bool boundary =
                (x + 1 < r.width && labels.at(x, y) != labels.at(x + 1, y)) ||
                (y + 1 < r.height && labels.at(x, y) != labels.at(x, y + 1)) ||
                (x > 0 && labels.at(x, y) != labels.at(x - 1, y)) ||
                (y > 0 && labels.at(x, y) != labels.at(x, y - 1));
            if (boundary) r.at(x, y) = 1.0;
        }
    return r;
}

Json phase_map_json(const std::vector<double>& constants) {
    Json phases = Json::array();
    int n = static_cast<int>(constants.size());
    for (int i = 0; i < n; ++i) {
        Json p;
        p["phase"] = i + 1;
        p["constant"] = constants[i];
        p["gray"] = n > 1 ? static_cast<double>(n - 1 - i) / (n - 1) : 1.0;
        phases.push_back(std::move(p));
    }
    return phases;
}

int cmd_denoise(const Options& o) {
    fs::create_directories(o.out);
    Json config = options_json(o, {"input", "lambda", "solver"});
    Json result;

    if (is_pcr_path(o.input) && use_exact(o)) {
        PcrImage f = read_pcr_file(o.input);
        PcrImage w = solve_arof_exact(f, o.lambda);
        write_pcr_file((fs::path(o.out) / "denoised.pcr").string(), w);
        result["output"] = "denoised.pcr";
        result["energy_input"] = energy_arof(f, f, o.lambda);
        result["energy_output"] = energy_arof(w, f, o.lambda);
    } else if (is_pcr_path(o.input)) {
        PcrImage fp = read_pcr_file(o.input);
        Rect dom = fp.grid()->domain();
        int h = std::max(
            1, static_cast<int>(std::lround(o.raster_size * dom.height() / dom.width())));
        Raster f = rasterize(fp, o.raster_size, h);
        auto [w, stats] = solve_arof_raster(f, iterative_config(o, o.lambda));
        write_png_file((fs::path(o.out) / "denoised.png").string(), w);
        result["output"] = "denoised.png";
        result["energy_input"] = energy_arof_raster(f, f, o.lambda);
        result["energy_output"] = energy_arof_raster(w, f, o.lambda);
        result["iterations"] = stats.iterations;
        result["gap"] = stats.gap;
    } else if (use_exact(o)) {
        Raster f = read_raster_file(o.input);
        PcrImage fp = raster_to_pcr(f);
        PcrImage wp = solve_arof_exact(fp, o.lambda);
        Raster w = rasterize(wp, f.width, f.height);
        w.pitch = f.pitch;
        write_raster_file((fs::path(o.out) / ("denoised" + fs::path(o.input).extension().string()))
                              .string(),
                          w);
        result["output"] = "denoised" + fs::path(o.input).extension().string();
        result["energy_input"] = energy_arof_raster(f, f, o.lambda);
        result["energy_output"] = energy_arof_raster(w, f, o.lambda);
    } else {
        Raster f = read_raster_file(o.input);
        auto [w, stats] = solve_arof_raster(f, iterative_config(o, o.lambda));
        std::string name = "denoised" + fs::path(o.input).extension().string();
        write_raster_file((fs::path(o.out) / name).string(), w);
        result["output"] = name;
        result["energy_input"] = energy_arof_raster(f, f, o.lambda);
        result["energy_output"] = energy_arof_raster(w, f, o.lambda);
        result["iterations"] = stats.iterations;
        result["gap"] = stats.gap;
    }
    Json rep;
    rep["command"] = "denoise";
    rep["config"] = config;
    rep["result"] = result;
    write_json_file((fs::path(o.out) / "energy_report.json").string(), rep);
    return kExitOk;
}

int cmd_segment(const Options& o) {
    if (o.phases < 2) throw std::invalid_argument("need at least two phases");
    fs::create_directories(o.out);
    bool strict = o.thresh == "strict";
    StoppingRule stop{o.eps_tol, o.max_iters};
    Json config =
        options_json(o, {"input", "mu", "phases", "eps_tol", "max_iters", "solver", "threshold"});

    if (!is_pcr_path(o.input) && !use_exact(o)) {
        if (o.phases != 2)
            throw std::invalid_argument(
                "iterative solver supports two phases; use --solver exact for more");
        Raster f = read_raster_file(o.input);
        FcmResult init = fcm_init(f, 2);
        auto res = acv_segment(f, o.mu, init.constants, stop, iterative_config(o, o.lambda),
                               strict);
        Raster labels = mask_label_raster(f, res.mask);
        write_png_file((fs::path(o.out) / "labels.png").string(), labels);
        Raster over = overlay_raster(raster_to_pcr(f).coarsened(), labels);
        write_png_file((fs::path(o.out) / "overlay.png").string(), over);
        Json result;
        result["constants"] = std::vector<double>{res.c1, res.c2};
        result["phase_map"] = phase_map_json({res.c1, res.c2});
        result["stop_reason"] = to_string(res.trace.stop);
        write_json_file((fs::path(o.out) / "report.json").string(),
                        segmentation_report("segment", config, res.trace, result));
        return res.trace.stop == StopReason::phase_collapsed ? kExitData : kExitOk;
    }

    PcrImage f = is_pcr_path(o.input) ? read_pcr_file(o.input)
                                      : raster_to_pcr(read_raster_file(o.input));
    FcmResult init = fcm_init(f, o.phases);
    Json result;
    IterationTrace trace;
    std::vector<int> labels;
    std::vector<double> constants;
    if (o.phases == 2) {
        auto res = acv_segment(f, o.mu, init.constants, stop, strict);
        trace = res.trace;
        constants = {res.c1, res.c2};
        labels.assign(f.grid()->cell_count(), 2);
        for (int c = 0; c < f.grid()->cell_count(); ++c)
            if (res.sigma.contains(c)) labels[c] = 1;
        if (res.trace.stop == StopReason::phase_collapsed) {
            result["stop_reason"] = to_string(res.trace.stop);
            write_json_file((fs::path(o.out) / "report.json").string(),
                            segmentation_report("segment", config, trace, result));
            std::cerr << "segment: phase collapsed\n";
            return kExitData;
        }
        result["energy"] = energy_acv(res.sigma, res.c1, res.c2, o.mu, f);
    } else {
        auto res = gn_alternate(f, o.mu, init.constants, stop);
        trace = res.trace;
        constants = res.constants.c;
        labels = chain_labels(res.chain);
        result["energy"] = energy_gn(res.chain, res.constants, o.mu, f);
    }
    int n = static_cast<int>(constants.size());
    Raster lr = label_raster(f, labels, n, o.raster_size);
    write_png_file((fs::path(o.out) / "labels.png").string(), lr);
    write_png_file((fs::path(o.out) / "overlay.png").string(), overlay_raster(f, lr));
    result["constants"] = constants;
    result["phase_map"] = phase_map_json(constants);
    result["stop_reason"] = to_string(trace.stop);
    result["boundary_on_grid_fraction"] = boundary_on_grid_fraction(lr, *build_grid(f));
    write_json_file((fs::path(o.out) / "report.json").string(),
                    segmentation_report("segment", config, trace, result));
    return kExitOk;
}

int cmd_trof(const Options& o) {
    if (o.phases < 2) throw std::invalid_argument("need at least two phases");
    fs::create_directories(o.out);
    bool strict = o.thresh == "strict";
    TauUpdate mode = o.tau_update == "midpoint" ? TauUpdate::midpoint : TauUpdate::literal;
    StoppingRule stop{o.eps_tol, o.max_iters};
    Json config = options_json(
        o, {"input", "lambda", "phases", "eps_tol", "max_iters", "solver", "threshold",
            "tau_update"});

    if (!is_pcr_path(o.input) && !use_exact(o)) {
        Raster f = read_raster_file(o.input);
        FcmResult init = [&] {
            try {
                return fcm_init(f, o.phases);
            } catch (const std::invalid_argument&) {
                // Too few distinct data values: cluster the denoised image,
                // whose levels are what the thresholds separate.
                auto [w, st] = solve_arof_raster(f, iterative_config(o, o.lambda));
                return fcm_init(w, o.phases);
            }
        }();
        auto res = trof_segment(f, o.lambda, init.constants.tau, stop,
                                iterative_config(o, o.lambda), mode, strict);
        int n = static_cast<int>(res.taus.size()) + 1;
        Raster labels(f.width, f.height, 0.0, f.pitch);
        for (int i = 0; i < f.pixel_count(); ++i) {
            int lab = n;
            for (int l = static_cast<int>(res.levels.size()); l >= 1; --l)
                if (res.levels[l - 1][i]) lab = l;
            labels.pixels[i] = n > 1 ? static_cast<double>(n - lab) / (n - 1) : 1.0;
        }
        write_png_file((fs::path(o.out) / "labels.png").string(), labels);
        Json result;
        result["taus"] = res.taus;
        result["tau_update"] = o.tau_update;
        result["stop_reason"] = to_string(res.trace.stop);
        write_json_file((fs::path(o.out) / "report.json").string(),
                        segmentation_report("trof", config, res.trace, result));
        return kExitOk;
    }

    PcrImage f = is_pcr_path(o.input) ? read_pcr_file(o.input)
                                      : raster_to_pcr(read_raster_file(o.input));
    FcmResult init = [&] {
        try {
            return fcm_init(f, o.phases);
        } catch (const std::invalid_argument&) {
            return fcm_init(solve_arof_exact(f, o.lambda), o.phases);
        }
    }();
    auto res = trof_segment(f, o.lambda, init.constants.tau, stop, mode, strict);
    int n = static_cast<int>(res.taus.size()) + 1;
    std::vector<int> labels = chain_labels(res.chain);
    Raster lr = label_raster(f, labels, n, o.raster_size);
    write_png_file((fs::path(o.out) / "labels.png").string(), lr);
    write_png_file((fs::path(o.out) / "overlay.png").string(), overlay_raster(f, lr));
    Json result;
    result["taus"] = res.taus;
    result["tau_update"] = o.tau_update;
    result["energy"] = energy_trofn(res.chain, res.taus, o.lambda, f);
    result["stop_reason"] = to_string(res.trace.stop);
    result["boundary_on_grid_fraction"] = boundary_on_grid_fraction(lr, *build_grid(f));
    write_json_file((fs::path(o.out) / "report.json").string(),
                    segmentation_report("trof", config, res.trace, result));
    return kExitOk;
}

// Randomized invariant suites for the verify command.
VerifyReport run_random_suites(int trials, unsigned long long seed) {
    VerifyReport rep;
    rep.title = "randomized invariant suites";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto random_instance = [&](int max_segments) {
        auto lines = [&](int segs, double lo, double hi) {
            std::vector<double> ls = {lo, hi};
            for (int i = 1; i < segs; ++i) ls.push_back(lo + (hi - lo) * unit(rng));
            std::sort(ls.begin(), ls.end());
            ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
            return ls;
        };
        int sx = 2 + static_cast<int>(rng() % max_segments);
        int sy = 2 + static_cast<int>(rng() % max_segments);
        GridPtr g = make_grid(lines(sx, 0, 1), lines(sy, 0, 1));
        std::vector<double> vals(g->cell_count());
        for (double& v : vals) v = unit(rng);
        return PcrImage(g, vals);
    };

    int nest_fail = 0, cut_fail = 0, thr_fail = 0, trof_fail = 0;
    for (int t = 0; t < trials; ++t) {
        PcrImage f = random_instance(3);
        double lambda = 1 + 15 * unit(rng);

        CellSet prev = CellSet::full_set(f.grid());
        for (int k = 0; k < 8; ++k) {
            double tau = static_cast<double>(k) / 7;
            auto r = min_cut_binary(parametric_cut_problem(f, lambda, tau));
            if (!r.set.is_subset_of(prev)) ++nest_fail;
            prev = r.set;
        }

        double c2 = 0.4 * unit(rng), c1 = 0.6 + 0.4 * unit(rng);
        double mu = 0.5 + 8 * unit(rng);
        auto cut = min_cut_binary(acv_cut_problem(f, c1, c2, mu));
        auto bf = brute_force_binary(f, BinaryEnergySpec::fixed(c1, c2, mu));
        double offset = 0;
        for (int i = 0; i < f.grid()->cell_count(); ++i)
            offset += mu * f.grid()->cell_area(i) * std::pow(c2 - f.value(i), 2);
        if (std::abs(cut.energy + offset - bf.energy) > 1e-9) ++cut_fail;

        PcrImage w = solve_arof_exact(f, acv_lambda(mu, c1, c2));
        CellSet thr = acv_from_arof(w, c1, c2);
        if (std::abs(energy_acv(thr, c1, c2, mu, f) - bf.energy) > 1e-9) ++thr_fail;

        std::vector<double> taus = {0.75, 0.4};
        PcrImage wl = solve_arof_exact(f, lambda);
        NestedChain chain = trof_levels(wl, taus);
        double sum = 0;
        for (int i = 1; i <= 2; ++i) {
            NestedChain two(f.grid(), {CellSet::empty_set(f.grid()), chain.level(i),
                                       CellSet::full_set(f.grid())});
            std::vector<double> ti = {taus[i - 1]};
            sum += energy_trofn(two, ti, lambda, f);
        }
        if (std::abs(energy_trofn(chain, taus, lambda, f) - sum) > 1e-12) ++trof_fail;
    }

    auto suite = [&](const std::string& name, int fails) {
        CheckResult c;
        c.name = name;
        c.pass = fails == 0;
        c.expected = "0 failures in " + std::to_string(trials) + " trials";
        c.actual = std::to_string(fails) + " failures";
        rep.checks.push_back(c);
    };
    suite("parametric cut nestedness", nest_fail);
    suite("direct cut equals exhaustive minimum", cut_fail);
    suite("midpoint threshold attains the exhaustive minimum", thr_fail);
    suite("truncated multiphase energy decouples", trof_fail);
    return rep;
}

int cmd_verify(const Options& o) {
    std::vector<VerifyReport> reports;
    reports.push_back(verify_example_break());
    reports.push_back(verify_counterexample_3phase());
    if (o.trials > 0) reports.push_back(run_random_suites(o.trials, o.seed));

    Json out = Json::array();
    bool all = true;
    for (const auto& rep : reports) {
        out.push_back(to_json(rep));
        all = all && rep.all_pass();
        for (const auto& c : rep.checks)
            std::cout << (c.pass ? "PASS" : (c.informational ? "info" : "FAIL")) << "  ["
                      << rep.title << "] " << c.name << '\n';
    }

    if (!o.input.empty() && !o.labels.empty()) {
        PcrImage f = read_pcr_file(o.input);
        Raster labels = read_raster_file(o.labels);
        double frac = boundary_on_grid_fraction(labels, *build_grid(f));
        Json j;
        j["title"] = "label-map reliability";
        j["boundary_on_grid_fraction"] = frac;
        out.push_back(j);
        std::cout << "info  [label-map reliability] boundary-on-grid fraction "
                  << format_double(frac) << '\n';
    }

    if (!o.out.empty()) {
        fs::create_directories(o.out);
        write_json_file((fs::path(o.out) / "verify_report.json").string(), out);
    }
    std::cout << (all ? "verify: all checks passed" : "verify: FAILURES present") << '\n';
    return all ? kExitOk : kExitVerify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic total-variation denoising and Chan-Vese segmentation, exact on "
                 "cell grids and iterative on rasters"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--solver", o.solver, "exact | iterative | auto")
            ->check(CLI::IsMember({"exact", "iterative", "auto"}));
        sub->add_option("--threshold", o.thresh, "strict | inclusive")
            ->check(CLI::IsMember({"strict", "inclusive"}));
        sub->add_option("--raster-size", o.raster_size, "raster width for emitted images");
    };

    CLI::App* denoise = app.add_subcommand("denoise", "minimize the TV-plus-fidelity energy");
    denoise->add_option("--input", o.input)->required();
    denoise->add_option("--lambda", o.lambda, "fidelity weight")->check(CLI::PositiveNumber);
    add_common(denoise);

    CLI::App* segment = app.add_subcommand("segment", "two-phase or nested multiphase "
                                                      "segmentation");
    segment->add_option("--input", o.input)->required();
    segment->add_option("--mu", o.mu, "fidelity weight")->check(CLI::PositiveNumber);
    segment->add_option("--phases", o.phases, "number of phases");
    segment->add_option("--eps-tol", o.eps_tol, "stopping tolerance");
    segment->add_option("--max-iters", o.max_iters, "iteration cap");
    add_common(segment);

    CLI::App* trof = app.add_subcommand("trof", "truncated multiphase segmentation");
    trof->add_option("--input", o.input)->required();
    trof->add_option("--lambda", o.lambda, "fidelity weight")->check(CLI::PositiveNumber);
    trof->add_option("--phases", o.phases, "number of phases");
    trof->add_option("--eps-tol", o.eps_tol, "stopping tolerance");
    trof->add_option("--max-iters", o.max_iters, "iteration cap");
    trof->add_option("--tau-update", o.tau_update, "literal | midpoint")
        ->check(CLI::IsMember({"literal", "midpoint"}));
    add_common(trof);

    CLI::App* verify = app.add_subcommand("verify", "worked examples and randomized suites");
    verify->add_option("--trials", o.trials, "randomized trials per suite");
    verify->add_option("--seed", o.seed, "seed for the randomized suites");
    verify->add_option("--input", o.input, "PCR datum for the label-map reliability check");
    verify->add_option("--labels", o.labels, "label map for the reliability check");
    verify->add_option("--out", o.out, "output directory for verify_report.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (denoise->parsed()) return cmd_denoise(o);
        if (segment->parsed()) return cmd_segment(o);
        if (trof->parsed()) return cmd_trof(o);
        if (verify->parsed()) return cmd_verify(o);
    } catch (const IoError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const EmptyPhaseError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
