#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dualflow {

/// Upper bound on the hypersurface dimension n; lets the hot paths keep
/// principal-curvature vectors on the stack.
inline constexpr int kMaxDimension = 32;

enum class Convexity { Convex, Concave, Linear, Unclassified };

const char* to_string(Convexity c);

namespace detail {
struct CurvatureImpl;
}

/// Symmetric, monotone, degree-1 homogeneous function on the positive cone.
/// Immutable value type; copies share the underlying evaluator.
class CurvatureFunction {
public:
    int dimension() const noexcept;
    Convexity convexity() const noexcept;
    const std::string& label() const noexcept;

    /// Throws DomainError when kappa is not in the open positive cone.
    double value(std::span<const double> kappa) const;
    void gradient(std::span<const double> kappa, std::span<double> out) const;

    double operator()(std::span<const double> kappa) const { return value(kappa); }
    std::vector<double> gradient(std::span<const double> kappa) const;

    /// Same function in another dimension (e.g. "pm:2" parsed before n is known).
    CurvatureFunction with_dimension(int n) const;

    /// Value and gradient without the cone check; callers guarantee kappa > 0.
    double value_unchecked(std::span<const double> kappa) const;
    void gradient_unchecked(std::span<const double> kappa, std::span<double> out) const;

    explicit CurvatureFunction(std::shared_ptr<const detail::CurvatureImpl> impl);

    const std::shared_ptr<const detail::CurvatureImpl>& shared_impl() const noexcept { return impl_; }

private:
    std::shared_ptr<const detail::CurvatureImpl> impl_;
};

/// ((1/n) sum kappa_i^p)^{1/p}; p >= 1.
CurvatureFunction power_mean(double p, int n);

/// (prod kappa_i)^{1/n}. Concave; shipped only as a negative control.
CurvatureFunction geometric_mean(int n);

/// Inverse function F~(kappa) = 1 / F(1/kappa_1, ..., 1/kappa_n).
CurvatureFunction dual(const CurvatureFunction& f);

/// "pm:1", "pm:2", "pm:4", "pm:8" or "geo". Throws DomainError otherwise.
CurvatureFunction parse_curvature_function(const std::string& name, int n);

/// Outcome of one inequality family over the sample set.
struct InequalityCheck {
    std::string name;      // e.g. "sum F_i <= 1"
    double min_margin = 0.0;
    std::int64_t violations = 0;
    std::vector<double> worst_kappa;
};

struct PropertyReport {
    std::string function_label;
    int dimension = 0;
    std::int64_t samples = 0;
    double tolerance = 1e-10;
    std::vector<InequalityCheck> checks;

    bool all_pass() const;
    const InequalityCheck* find(const std::string& prefix) const;
};

/// Checks the inequality set for convex normalized curvature functions on
/// `sample_count` log-uniform draws from (0.1, 10)^n, sorted ascending, plus
/// midpoint convexity of F and concavity of its dual on `segment_count`
/// segments. Violations are reported, never thrown.
PropertyReport property_suite(const CurvatureFunction& f, std::int64_t sample_count,
                              std::uint64_t seed, int segment_count = 100);

}  // namespace dualflow
