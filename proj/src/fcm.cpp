#include "anicv/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace anicv {

namespace {

// Weighted quantile of the value distribution, used for deterministic seeding.
double weighted_quantile(const std::vector<std::pair<double, double>>& sorted_vw, double q) {
    double total = 0;
    for (const auto& [v, w] : sorted_vw) total += w;
    double target = q * total, acc = 0;
    for (const auto& [v, w] : sorted_vw) {
        acc += w;
        if (acc >= target) return v;
    }
    return sorted_vw.back().first;
}

} // namespace

FcmResult fcm_init(std::span<const double> values, std::span<const double> weights, int n) {
    if (n < 2) throw std::invalid_argument("need at least two clusters");
    if (values.size() != weights.size() || values.empty())
        throw std::invalid_argument("values and weights must match and be non-empty");

    std::set<double> distinct(values.begin(), values.end());
    if (distinct.size() < 2) throw std::invalid_argument("constant image: clustering undefined");
    if (static_cast<int>(distinct.size()) < n)
        throw std::invalid_argument("fewer distinct values than requested clusters");

    std::vector<std::pair<double, double>> vw(values.size());
    for (size_t i = 0; i < values.size(); ++i) vw[i] = {values[i], weights[i]};
    std::sort(vw.begin(), vw.end());

    std::vector<double> centers(n);
    for (int i = 0; i < n; ++i) centers[i] = weighted_quantile(vw, (i + 0.5) / n);
    // Distinct seeds; nudge duplicates toward the data range ends.
    std::sort(centers.begin(), centers.end());
    for (int i = 1; i < n; ++i)
        if (centers[i] <= centers[i - 1]) centers[i] = std::nextafter(centers[i - 1], 2.0);

    int iters = 0;
    std::vector<double> num(n), den(n), u(n);
    for (; iters < 500; ++iters) {
        std::fill(num.begin(), num.end(), 0.0);
        std::fill(den.begin(), den.end(), 0.0);
        for (const auto& [x, wgt] : vw) {
            int exact = -1;
            for (int i = 0; i < n; ++i)
                if (x == centers[i]) exact = i;
            if (exact >= 0) {
                num[exact] += wgt * x;
                den[exact] += wgt;
                continue;
            }
            // m = 2: membership of cluster i is (1/d_i^2) normalised.
            double inv_total = 0;
            for (int i = 0; i < n; ++i) {
                u[i] = 1.0 / ((x - centers[i]) * (x - centers[i]));
                inv_total += u[i];
            }
            for (int i = 0; i < n; ++i) {
                double m = u[i] / inv_total;
                num[i] += wgt * m * m * x;
                den[i] += wgt * m * m;
            }
        }
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            double c = den[i] > 0 ? num[i] / den[i] : centers[i];
            moved = std::max(moved, std::abs(c - centers[i]));
            centers[i] = c;
        }
        if (moved < 1e-12) break;
    }

    std::sort(centers.rbegin(), centers.rend());
    FcmResult res;
    for (int i = 1; i < n; ++i)
        if (centers[i - 1] - centers[i] < 1e-12) {
            centers[i] = centers[i - 1] - 1e-9;
            res.ties_perturbed = true;
        }
    res.constants.c = centers;
    res.constants.derive_midpoint_taus();
    res.iterations = iters;
    return res;
}

FcmResult fcm_init(const PcrImage& f, int n) {
    std::vector<double> w(f.grid()->cell_count());
    for (int i = 0; i < f.grid()->cell_count(); ++i) w[i] = f.grid()->cell_area(i);
    return fcm_init(f.values(), w, n);
}

FcmResult fcm_init(const Raster& f, int n) {
    std::vector<double> w(f.pixel_count(), f.pitch * f.pitch);
    return fcm_init(f.pixels, w, n);
}

} // namespace anicv
