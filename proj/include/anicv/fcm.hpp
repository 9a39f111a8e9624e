#ifndef ANICV_FCM_HPP
#define ANICV_FCM_HPP

#include <span>

#include "anicv/geometry.hpp"
#include "anicv/raster.hpp"

namespace anicv {

struct FcmResult {
    PhaseConstants constants; // c sorted strictly decreasing, taus at midpoints
    int iterations = 0;
    bool ties_perturbed = false;
};

/// Fuzzy c-means (fuzzifier 2) on a weighted 1-d value distribution.
/// Throws on constant data or when n exceeds the number of distinct values.
FcmResult fcm_init(std::span<const double> values, std::span<const double> weights, int n);
FcmResult fcm_init(const PcrImage& f, int n);
FcmResult fcm_init(const Raster& f, int n);

} // namespace anicv

#endif
