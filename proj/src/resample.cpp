#include "dualflow/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dualflow/error.hpp"

namespace dualflow {

PolarInterpolant::PolarInterpolant(std::span<const double> nodes, std::span<const double> values) {
    const std::size_t m = nodes.size();
    if (m < 4 || values.size() != m) throw DomainError("interpolant needs at least four matching nodes");
    for (std::size_t i = 1; i < m; ++i)
        if (!(nodes[i] > nodes[i - 1])) throw DomainError("interpolation nodes must be strictly increasing");

    const double pi = std::numbers::pi;
    x_.reserve(m + 4);
    y_.reserve(m + 4);
    for (int j = 2; j >= 1; --j) {
        x_.push_back(-nodes[j]);
        y_.push_back(values[j]);
    }
    x_.insert(x_.end(), nodes.begin(), nodes.end());
    y_.insert(y_.end(), values.begin(), values.end());
    for (std::size_t j = 1; j <= 2; ++j) {
        x_.push_back(2.0 * pi - nodes[m - 1 - j]);
        y_.push_back(values[m - 1 - j]);
    }
}

int PolarInterpolant::interval(double theta) const {
    // index i of the padded node with x_[i] <= theta < x_[i+1], restricted to the interior
    auto it = std::upper_bound(x_.begin() + 2, x_.end() - 2, theta);
    int i = static_cast<int>(it - x_.begin()) - 1;
    return std::clamp(i, 2, static_cast<int>(x_.size()) - 4);
}

double PolarInterpolant::eval_stencil(int first, double theta) const {
    double sum = 0.0;
    for (int a = first; a < first + 4; ++a) {
        double w = 1.0;
        for (int b = first; b < first + 4; ++b)
            if (b != a) w *= (theta - x_[b]) / (x_[a] - x_[b]);
        sum += w * y_[a];
    }
    return sum;
}

double PolarInterpolant::operator()(double theta) const {
    const int i = interval(theta);
    return eval_stencil(i - 1, theta);
}

double PolarInterpolant::error_estimate(double theta) const {
    const int i = interval(theta);
    const int last = static_cast<int>(x_.size()) - 4;
    const double centred = eval_stencil(i - 1, theta);
    const double other = i - 2 >= 0 ? eval_stencil(i - 2, theta) : eval_stencil(std::min(i, last), theta);
    return std::abs(centred - other);
}

}  // namespace dualflow
