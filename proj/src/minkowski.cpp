#include "dualflow/minkowski.hpp"

#include <cmath>
#include <string>

#include "dualflow/error.hpp"

namespace dualflow {

const char* to_string(GeometryFailure kind) {
    switch (kind) {
        case GeometryFailure::NotSpacelike: return "not spacelike";
        case GeometryFailure::ConvexityLost: return "convexity lost";
        case GeometryFailure::NonFinite: return "non-finite value";
        case GeometryFailure::NotGraphical: return "dual is not graphical";
        case GeometryFailure::NotInterior: return "Beltrami point not interior";
    }
    return "unknown";
}

GeometryError::GeometryError(GeometryFailure kind, int index)
    : std::runtime_error(std::string(to_string(kind)) + " at grid index " + std::to_string(index)),
      kind_(kind),
      index_(index) {}

namespace {
std::string join_violations(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) out += "\n  " + s;
    return out;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

double lorentz_dot(const LorentzVector& a, const LorentzVector& b) {
    return -a[0] * b[0] + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

double quadratic_form(const LorentzVector& x) { return lorentz_dot(x, x); }

bool on_quadric(const LorentzVector& x, SpaceTag space, double tol) {
    const double q = quadratic_form(x);
    if (space == SpaceTag::Hyperbolic) return std::abs(q + 1.0) <= tol && x[0] > 0.0;
    return std::abs(q - 1.0) <= tol;
}

LorentzVector project_to_quadric(const LorentzVector& x, SpaceTag space) {
    const double q = quadratic_form(x);
    if ((space == SpaceTag::Hyperbolic && q >= 0.0) || (space == SpaceTag::DeSitter && q <= 0.0))
        throw DomainError("cannot project vector of wrong causal type onto quadric");
    return x / std::sqrt(std::abs(q));
}

Vec3 project_to_quadric(const Vec3& x, SpaceTag space) {
    const double q = quadratic_form(x);
    if ((space == SpaceTag::Hyperbolic && q >= 0.0) || (space == SpaceTag::DeSitter && q <= 0.0))
        throw DomainError("cannot project vector of wrong causal type onto quadric");
    return x / std::sqrt(std::abs(q));
}

LorentzTransform::LorentzTransform(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2)
        throw DomainError("Lorentz transform must be square with dimension >= 2");
}

LorentzTransform LorentzTransform::identity(int dim) {
    return LorentzTransform(Eigen::MatrixXd::Identity(dim, dim));
}

Orientation LorentzTransform::orientation() const noexcept {
    return matrix_(0, 0) > 0.0 ? Orientation::Orthochronous : Orientation::TimeFlip;
}

LorentzTransform LorentzTransform::after(const LorentzTransform& first) const {
    return LorentzTransform(matrix_ * first.matrix_);
}

double LorentzTransform::metric_residual() const {
    Eigen::MatrixXd eta = Eigen::MatrixXd::Identity(dim(), dim());
    eta(0, 0) = -1.0;
    return (matrix_.transpose() * eta * matrix_ - eta).cwiseAbs().maxCoeff();
}

LorentzTransform boost(int dim, double theta) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
    m(0, 0) = std::cosh(theta);
    m(0, 1) = std::sinh(theta);
    m(1, 0) = std::sinh(theta);
    m(1, 1) = std::cosh(theta);
    return LorentzTransform(std::move(m));
}

LorentzTransform givens(int dim, int i, int j, double c, double s) {
    if (i < 1 || j < 1 || i >= dim || j >= dim || i == j)
        throw DomainError("givens rotation needs two distinct spatial indices");
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
    m(i, i) = c;
    m(j, j) = c;
    m(i, j) = -s;
    m(j, i) = s;
    return LorentzTransform(std::move(m));
}

LorentzTransform time_flip(int dim) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
    m(0, 0) = -1.0;
    return LorentzTransform(std::move(m));
}

LorentzVector beltrami_point(int dim) {
    LorentzVector p = LorentzVector::Zero(dim);
    p[0] = 1.0;
    return p;
}

LorentzTransform normalize_to_beltrami(const LorentzVector& p) {
    if (!on_quadric(p, SpaceTag::Hyperbolic))
        throw DomainError("normalize_to_beltrami: point is not on the hyperboloid");
    const int dim = static_cast<int>(p.size());

    // Rotate the spatial part onto +e1, zeroing the trailing components one by one.
    LorentzTransform total = LorentzTransform::identity(dim);
    LorentzVector work = p;
    for (int j = dim - 1; j >= 2; --j) {
        const double a = work[1];
        const double b = work[j];
        const double r = std::hypot(a, b);
        if (r == 0.0 || b == 0.0) continue;
        // rotation sending (a, b) in the (1, j) plane to (r, 0)
        const LorentzTransform g = givens(dim, 1, j, a / r, -b / r);
        work = g.apply(work);
        total = g.after(total);
    }
    if (work[1] < 0.0) {
        // half-turn in the (1, 2) plane keeps the transform a proper rotation
        const LorentzTransform g = givens(dim, 1, 2, -1.0, 0.0);
        work = g.apply(work);
        total = g.after(total);
    }
    const double rapidity = std::asinh(work[1]);
    return boost(dim, -rapidity).after(total);
}

}  // namespace dualflow
