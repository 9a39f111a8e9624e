#ifndef ANICV_ENERGY_HPP
#define ANICV_ENERGY_HPP

#include <span>

#include "anicv/geometry.hpp"

namespace anicv {

/// l1 perimeter of e relative to the open domain: total length of interior
/// edges separating a member cell from a non-member cell. Edges on the
/// domain boundary contribute nothing.
double per1(const CellSet& e);

/// Perimeter of `inner` relative to the open set generated by `outer`
/// (inner must be contained in outer): only edges between inner and
/// outer \ inner count.
double rel_per1(const CellSet& inner, const CellSet& outer);

/// l1 total variation of u in the open domain.
double total_variation1(const PcrImage& u);

/// |Du|_1 + (lambda/2) * integral (u - f)^2. Grids may differ; they are
/// refined to a common grid internally.
double energy_arof(const PcrImage& u, const PcrImage& f, double lambda);

/// Per1(e) + mu * (integral_e (c1-f)^2 + integral_comp (c2-f)^2).
double energy_acv(const CellSet& e, double c1, double c2, double mu, const PcrImage& f);

/// Relaxed two-phase energy; returns +inf when u leaves [0,1].
double energy_g2(const PcrImage& u, double c1, double c2, double mu, const PcrImage& f);

/// Nested multiphase energy: sum_i Per1(S_{i-1}; S_i) + mu * band fidelity.
double energy_gn(const NestedChain& chain, const PhaseConstants& c, double mu,
                 const PcrImage& f);

/// General multiphase Chan-Vese variant on a disjoint partition:
/// sum_i Per1(union_{j<=i} P_j; domain) + mu_i * integral_{P_i} (c_i-f)^2.
double energy_cvn(std::span<const CellSet> partition, std::span<const double> c,
                  std::span<const double> mu, const PcrImage& f);

/// Truncated multiphase ROF: sum_{i<n} Per1(S_i) + lambda * integral_{S_i} (tau_i - f).
double energy_trofn(const NestedChain& chain, std::span<const double> tau, double lambda,
                    const PcrImage& f);

} // namespace anicv

#endif
