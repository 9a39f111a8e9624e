#ifndef ANICV_ALGORITHMS_HPP
#define ANICV_ALGORITHMS_HPP

#include <string>
#include <vector>

#include "anicv/geometry.hpp"
#include "anicv/graphcut.hpp"
#include "anicv/pd.hpp"

namespace anicv {

struct StoppingRule {
    double eps_tol = 1e-3;
    int max_iters = 200;
    void validate() const;
};

enum class StopReason { converged, max_iters, phase_collapsed };
const char* to_string(StopReason r);

/// One outer iteration of an alternating scheme. Energies refer to the
/// scheme's own objective: before the set update (at the incoming sets),
/// after it, and after the parameter update. NaN where undefined (first
/// record, or across a phase-removal event).
struct IterationRecord {
    int k = 0;
    std::vector<double> params;        // constants c, or thresholds tau
    std::vector<double> level_areas;   // areas of the interior level sets
    double sym_diff_sq = 0;            // sum_i |S_i^k xor S_i^{k-1}|^2
    double energy_before_sets = 0;
    double energy_after_sets = 0;
    double energy_after_params = 0;
};

struct IterationTrace {
    std::vector<IterationRecord> records;
    std::vector<std::string> events;
    StopReason stop = StopReason::converged;
    int iterations() const { return static_cast<int>(records.size()) - 1; }
};

/// Denoising weight matched to the fixed-constants two-phase energy:
/// thresholding the AROF minimizer at (c1+c2)/2 minimizes that energy
/// exactly when the AROF weight is 2 mu (c1 - c2).
double acv_lambda(double mu, double c1, double c2);

/// Band means of f over S_i \ S_{i-1}; throws EmptyPhaseError with the index
/// of the first empty band.
PhaseConstants update_constants(const NestedChain& chain, const PcrImage& f);
/// Two-phase case: means inside and outside sigma.
std::pair<double, double> update_constants(const CellSet& sigma, const PcrImage& f);

/// Threshold of a denoised image at the midpoint of ordered constants.
/// Requires c1 > c2; w must minimize AROF at acv_lambda(mu, c1, c2) for the
/// result to minimize the two-phase energy at those constants.
CellSet acv_from_arof(const PcrImage& w, double c1, double c2, bool strict = true);

struct Segmentation2Result {
    CellSet sigma;
    double c1 = 0, c2 = 0;
    IterationTrace trace;
};

/// Two-phase alternating segmentation: denoise at the matched weight,
/// threshold at the midpoint, re-fit constants, repeat under the stopping
/// rule.
Segmentation2Result acv_segment(const PcrImage& f, double mu, const PhaseConstants& init,
                                const StoppingRule& stop, bool strict_threshold = true);

/// Exact cyclic descent over chain levels at fixed constants: each level
/// solves its binary subproblem by min-cut; sweeps repeat until no level
/// changes. Constants must be ordered (c_i >= c_{i+1}). The result is
/// level-wise optimal; global optimality is certified only against the
/// brute-force oracle on small grids.
NestedChain gn_fixed_c_minimize(const PcrImage& f, const PhaseConstants& c, double mu,
                                const NestedChain* warm_start = nullptr);

struct SegmentationNResult {
    NestedChain chain;
    PhaseConstants constants;
    IterationTrace trace;
};

/// Multiphase alternating segmentation on nested chains. Empty phases are
/// removed (n shrinks) and recorded in the trace.
SegmentationNResult gn_alternate(const PcrImage& f, double mu, const PhaseConstants& init,
                                 const StoppingRule& stop);

/// Upper level sets of w at strictly decreasing thresholds; the minimizer of
/// the truncated multiphase objective at fixed thresholds when w minimizes
/// AROF at the same lambda.
NestedChain trof_levels(const PcrImage& w, std::span<const double> taus, bool strict = true);

enum class TauUpdate {
    literal,  // tau_i <- mean of f over S_{i+1} \ S_i
    midpoint, // tau_i <- midpoint of adjacent band means
};

struct TrofResult {
    NestedChain chain;
    std::vector<double> taus;
    IterationTrace trace;
};

/// Truncated-ROF multiphase segmentation: denoise once, then alternate
/// thresholding and threshold updates under the stopping rule.
TrofResult trof_segment(const PcrImage& f, double lambda, std::vector<double> init_tau,
                        const StoppingRule& stop, TauUpdate mode = TauUpdate::literal,
                        bool strict_threshold = true);

// ---------------------------------------------------------------------------
// Raster counterparts built on the iterative solver; level sets are pixel
// masks. Used for non-PCR data where the exact cell solver is not the
// appropriate engine.

struct RasterSegmentation2Result {
    std::vector<bool> mask;
    double c1 = 0, c2 = 0;
    IterationTrace trace;
};

RasterSegmentation2Result acv_segment(const Raster& f, double mu, const PhaseConstants& init,
                                      const StoppingRule& stop, const SolverConfig& solver,
                                      bool strict_threshold = true);

struct RasterTrofResult {
    std::vector<std::vector<bool>> levels; // S_1 .. S_{n-1}
    std::vector<double> taus;
    IterationTrace trace;
};

RasterTrofResult trof_segment(const Raster& f, double lambda, std::vector<double> init_tau,
                              const StoppingRule& stop, const SolverConfig& solver,
                              TauUpdate mode = TauUpdate::literal, bool strict_threshold = true);

} // namespace anicv

#endif
