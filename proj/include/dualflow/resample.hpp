#pragma once

#include <span>
#include <vector>

namespace dualflow {

/// Values of an axially symmetric meridian field known at strictly increasing
/// latitudes in [0, pi] (first node at 0, last at pi). Evaluation uses local
/// four-point cubic Lagrange stencils; the field is continued evenly across
/// both poles so stencils near the axis stay centred.
class PolarInterpolant {
public:
    PolarInterpolant(std::span<const double> nodes, std::span<const double> values);

    double operator()(double theta) const;

    /// Difference between the two cubic stencils that bracket theta; a
    /// cheap local estimate of the interpolation error.
    double error_estimate(double theta) const;

private:
    double eval_stencil(int first, double theta) const;
    int interval(double theta) const;

    std::vector<double> x_;  // padded with two mirrored nodes each side
    std::vector<double> y_;
};

/// Even-reflection index map for grid data on [0, K] (ghosts at both poles).
inline int reflect_index(int j, int K) {
    if (j < 0) return -j;
    if (j > K) return 2 * K - j;
    return j;
}

}  // namespace dualflow
