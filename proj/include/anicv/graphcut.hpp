#ifndef ANICV_GRAPHCUT_HPP
#define ANICV_GRAPHCUT_HPP

#include "anicv/geometry.hpp"
#include "anicv/maxflow.hpp"

namespace anicv {

/// Binary set energy on the cell graph:
///   E(S) = sum_{c in S} unary[c] + sum_{edges cut by S} pairwise[e]
/// subject to forced_in <= S <= domain \ forced_out. Pairwise weights must be
/// non-negative (submodular), which makes the minimum exactly computable by
/// a minimum s-t cut.
struct CutProblem {
    GridPtr grid;
    std::vector<double> unary;    // one per cell
    std::vector<double> pairwise; // one per interior edge, grid edge order
    CellSet forced_in, forced_out;

    /// Zero unaries, edge lengths as pairwise weights, no constraints.
    static CutProblem with_edge_lengths(GridPtr grid);
    void validate() const;
};

enum class TieBreak { minimal, maximal };

struct MinCutResult {
    CellSet set;
    double energy;
    /// False when the minimal and maximal minimizers differ (an energy tie).
    bool unique;
};

/// Global minimizer of the CutProblem energy. With TieBreak::minimal the
/// returned set is the intersection of all minimizers (source side of the
/// residual reachability cut); with maximal, their union.
MinCutResult min_cut_binary(const CutProblem& p, TieBreak tie = TieBreak::minimal);

/// Cut problem whose minimizers are the parametric level sets
///   argmin_E Per1(E; domain) + lambda * integral_E (tau - f).
CutProblem parametric_cut_problem(const PcrImage& f, double lambda, double tau);

/// Cut problem for the two-phase energy at fixed constants: minimizers agree
/// with those of energy_acv(., c1, c2, mu, f); energies differ by the
/// constant mu * integral (c2 - f)^2.
CutProblem acv_cut_problem(const PcrImage& f, double c1, double c2, double mu);

/// Cut problem for one level step of the nested multiphase descent: choose
/// below <= E <= above minimizing
///   Per1(below; E) + Per1(E; above) + mu (ci - cj) integral_E (ci + cj - 2f),
/// dropping E-independent terms. Edges touching cells outside above \ below
/// carry zero weight.
CutProblem level_cut_problem(const PcrImage& f, const CellSet& below, const CellSet& above,
                             double ci, double cj, double mu);

/// Exact minimizer of |Du|_1 + (lambda/2) integral (u-f)^2 on the grid of f,
/// computed as the monotone parametric cut family resolved by bisection and
/// snapped to the level-set optimality values. Requires f values in [0,1].
PcrImage solve_arof_exact(const PcrImage& f, double lambda);

} // namespace anicv

#endif
