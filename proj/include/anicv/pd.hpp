#ifndef ANICV_PD_HPP
#define ANICV_PD_HPP

#include <vector>

#include "anicv/raster.hpp"

namespace anicv {

/// Configuration for the first-order raster solver.
struct SolverConfig {
    double lambda = 8.0;
    int max_iters = 5000;
    double gap_tol = 1e-6; // absolute duality gap
    enum class Mode { anisotropic_l1, isotropic_l2 } mode = Mode::anisotropic_l1;
    int checkpoint_every = 10;

    void validate() const;
};

struct SolveStats {
    int iterations = 0;
    double gap = 0.0;
    /// Energy of the reported iterate at each checkpoint; nonincreasing
    /// because the reported iterate is the best one seen so far.
    std::vector<double> checkpoint_energies;
};

/// Approximate minimizer of the discrete anisotropic (or isotropic) TV plus
/// (lambda/2) L2 fidelity via an accelerated primal-dual scheme. Terminates
/// on duality gap <= gap_tol or max_iters.
std::pair<Raster, SolveStats> solve_arof_raster(const Raster& f, const SolverConfig& cfg);

/// Discrete anisotropic energy: forward differences, reflecting boundary,
/// pixel-area weighted fidelity.
double energy_arof_raster(const Raster& u, const Raster& f, double lambda);

} // namespace anicv

#endif
