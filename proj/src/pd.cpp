#include "anicv/pd.hpp"

#include <cmath>
#include <stdexcept>

namespace anicv {

void SolverConfig::validate() const {
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    if (max_iters <= 0) throw std::invalid_argument("max_iters must be positive");
    if (!(gap_tol > 0)) throw std::invalid_argument("gap tolerance must be positive");
    if (checkpoint_every <= 0) throw std::invalid_argument("checkpoint interval must be positive");
}

namespace {

struct Dual {
    std::vector<double> x, y; // per-pixel dual components
};

double tv_raster(const Raster& u, bool isotropic) {
    double tv = 0;
    for (int y = 0; y < u.height; ++y)
        for (int x = 0; x < u.width; ++x) {
            double dx = x + 1 < u.width ? u.at(x + 1, y) - u.at(x, y) : 0.0;
            double dy = y + 1 < u.height ? u.at(x, y + 1) - u.at(x, y) : 0.0;
            tv += isotropic ? std::hypot(dx, dy) : std::abs(dx) + std::abs(dy);
        }
    return tv * u.pitch;
}

double fidelity(const Raster& u, const Raster& f, double lambda) {
    double s = 0;
    for (int i = 0; i < u.pixel_count(); ++i) s += (u.pixels[i] - f.pixels[i]) * (u.pixels[i] - f.pixels[i]);
    return 0.5 * lambda * u.pitch * u.pitch * s;
}

double primal_energy(const Raster& u, const Raster& f, double lambda, bool isotropic) {
    return tv_raster(u, isotropic) + fidelity(u, f, lambda);
}

// Internal dual value <f, K*p> - |K*p|^2 / (2 lambda), with K*p = -div p.
// The iteration runs on the unit-pitch rescaling of the objective (divide by
// pitch^2), which keeps the strong-convexity constant at lambda regardless of
// resolution; real energies are pitch^2 times internal ones.
double dual_energy(const Dual& p, const Raster& f, double lambda) {
    double dot = 0, nrm = 0;
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            int i = y * f.width + x;
            double div = 0;
            if (x + 1 < f.width) div += p.x[i];
            if (x > 0) div -= p.x[i - 1];
            if (y + 1 < f.height) div += p.y[i];
            if (y > 0) div -= p.y[i - f.width];
            double kstar = -div;
            dot += kstar * f.pixels[i];
            nrm += kstar * kstar;
        }
    return dot - nrm / (2 * lambda);
}

} // namespace

double energy_arof_raster(const Raster& u, const Raster& f, double lambda) {
    if (u.width != f.width || u.height != f.height)
        throw std::invalid_argument("raster shapes differ");
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    return primal_energy(u, f, lambda, false);
}

std::pair<Raster, SolveStats> solve_arof_raster(const Raster& f, const SolverConfig& cfg) {
    cfg.validate();
    bool iso = cfg.mode == SolverConfig::Mode::isotropic_l2;
    int w = f.width, h = f.height, n = f.pixel_count();
    double pitch = f.pitch;
    double rho = 1.0 / pitch; // dual-ball radius of the unit-pitch rescaling
    double scale = pitch * pitch;

    Raster u = f;
    Raster ubar = f;
    Dual p{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};

    SolveStats stats;
    Raster best = u;
    double best_energy = primal_energy(u, f, cfg.lambda, iso);
    double gap = best_energy - scale * dual_energy(p, f, cfg.lambda);
    stats.checkpoint_energies.push_back(best_energy);
    if (gap <= cfg.gap_tol) {
        stats.gap = gap;
        return {best, stats};
    }

    double tau = 1.0 / std::sqrt(8.0), sigma = 1.0 / std::sqrt(8.0);
    for (int it = 1; it <= cfg.max_iters; ++it) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                int i = y * w + x;
                double gx = x + 1 < w ? ubar.pixels[i + 1] - ubar.pixels[i] : 0.0;
                double gy = y + 1 < h ? ubar.pixels[i + w] - ubar.pixels[i] : 0.0;
                double px = p.x[i] + sigma * gx;
                double py = p.y[i] + sigma * gy;
                if (iso) {
                    double nrm = std::hypot(px, py);
                    if (nrm > rho) {
                        px *= rho / nrm;
                        py *= rho / nrm;
                    }
                } else {
                    px = std::clamp(px, -rho, rho);
                    py = std::clamp(py, -rho, rho);
                }
                p.x[i] = px;
                p.y[i] = py;
            }

        // Primal descent through the prox of the quadratic fidelity, with the
        // acceleration rule for a lambda-strongly-convex term.
        double theta = 1.0 / std::sqrt(1.0 + 2.0 * cfg.lambda * tau);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                int i = y * w + x;
                double div = 0;
                if (x + 1 < w) div += p.x[i];
                if (x > 0) div -= p.x[i - 1];
                if (y + 1 < h) div += p.y[i];
                if (y > 0) div -= p.y[i - w];
                double v = u.pixels[i] + tau * div;
                double unew = (v + tau * cfg.lambda * f.pixels[i]) / (1.0 + tau * cfg.lambda);
                ubar.pixels[i] = unew + theta * (unew - u.pixels[i]);
                u.pixels[i] = unew;
            }
        tau *= theta;
        sigma /= theta;

        if (it % cfg.checkpoint_every == 0 || it == cfg.max_iters) {
            double e = primal_energy(u, f, cfg.lambda, iso);
            if (e < best_energy) {
                best_energy = e;
                best = u;
            }
            stats.checkpoint_energies.push_back(best_energy);
            stats.iterations = it;
            gap = best_energy - scale * dual_energy(p, f, cfg.lambda);
            if (gap <= cfg.gap_tol) break;
        }
    }

    // Clipping to the datum range cannot increase either energy term.
    double lo = f.min_value(), hi = f.max_value();
    for (double& v : best.pixels) v = std::clamp(v, lo, hi);
    double clipped = primal_energy(best, f, cfg.lambda, iso);
    if (clipped < best_energy) best_energy = clipped;
    stats.gap = best_energy - scale * dual_energy(p, f, cfg.lambda);
    return {best, stats};
}

} // namespace anicv
