#include "dualflow/curvature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "dualflow/error.hpp"

namespace dualflow {

const char* to_string(Convexity c) {
    switch (c) {
        case Convexity::Convex: return "convex";
        case Convexity::Concave: return "concave";
        case Convexity::Linear: return "linear";
        case Convexity::Unclassified: return "unclassified";
    }
    return "unclassified";
}

namespace detail {

struct CurvatureImpl {
    int n;
    std::string label;
    Convexity convexity;

    CurvatureImpl(int n_, std::string label_, Convexity c) : n(n_), label(std::move(label_)), convexity(c) {}
    virtual ~CurvatureImpl() = default;
    virtual double value(std::span<const double> k) const = 0;
    virtual void gradient(std::span<const double> k, std::span<double> out) const = 0;
    virtual std::shared_ptr<const CurvatureImpl> resized(int n) const = 0;
};

namespace {

class PowerMean final : public CurvatureImpl {
public:
    PowerMean(double p, int n)
        : CurvatureImpl(n, label_for(p), p == 1.0 ? Convexity::Linear : Convexity::Convex),
          p_(p),
          ip_(p == std::floor(p) && p <= 16.0 ? static_cast<int>(p) : 0) {}

    double value(std::span<const double> k) const override {
        if (ip_ == 1) {
            double s = 0.0;
            for (double x : k) s += x;
            return s / n;
        }
        double s = 0.0;
        for (double x : k) s += pw(x);
        return root(s / n);
    }

    void gradient(std::span<const double> k, std::span<double> out) const override {
        if (ip_ == 1) {
            for (int i = 0; i < n; ++i) out[i] = 1.0 / n;
            return;
        }
        // F_i = (1/n) kappa_i^{p-1} F^{1-p} = (1/n) (kappa_i / F)^{p-1}
        const double f = value(k);
        for (int i = 0; i < n; ++i) out[i] = pw(k[i] / f) / (k[i] / f) / n;
    }

    std::shared_ptr<const CurvatureImpl> resized(int m) const override {
        return std::make_shared<PowerMean>(p_, m);
    }

private:
    static std::string label_for(double p) {
        if (p == std::floor(p)) return "pm:" + std::to_string(static_cast<int>(p));
        return "pm:" + std::to_string(p);
    }

    double pw(double x) const {
        if (ip_ == 0) return std::pow(x, p_);
        double r = x;
        for (int i = 1; i < ip_; ++i) r *= x;
        return r;
    }

    double root(double s) const {
        if (ip_ == 2) return std::sqrt(s);
        if (ip_ == 4) return std::sqrt(std::sqrt(s));
        if (ip_ == 8) return std::sqrt(std::sqrt(std::sqrt(s)));
        return std::pow(s, 1.0 / p_);
    }

    double p_;
    int ip_;
};

class GeometricMean final : public CurvatureImpl {
public:
    explicit GeometricMean(int n) : CurvatureImpl(n, "geo", Convexity::Concave) {}

    double value(std::span<const double> k) const override {
        double s = 0.0;
        for (double x : k) s += std::log(x);
        return std::exp(s / n);
    }

    void gradient(std::span<const double> k, std::span<double> out) const override {
        const double f = value(k);
        for (int i = 0; i < n; ++i) out[i] = f / (n * k[i]);
    }

    std::shared_ptr<const CurvatureImpl> resized(int m) const override {
        return std::make_shared<GeometricMean>(m);
    }
};

Convexity dual_convexity(const CurvatureImpl& inner);

class Dual final : public CurvatureImpl {
public:
    explicit Dual(std::shared_ptr<const CurvatureImpl> inner)
        : CurvatureImpl(inner->n, "dual(" + inner->label + ")", dual_convexity(*inner)),
          inner_(std::move(inner)) {}

    double value(std::span<const double> k) const override {
        std::array<double, kMaxDimension> inv{};
        for (int i = 0; i < n; ++i) inv[i] = 1.0 / k[i];
        return 1.0 / inner_->value(std::span<const double>(inv.data(), n));
    }

    void gradient(std::span<const double> k, std::span<double> out) const override {
        // d/dk_i [1 / F(1/k)] = F(1/k)^{-2} F_i(1/k) k_i^{-2}
        std::array<double, kMaxDimension> inv{};
        for (int i = 0; i < n; ++i) inv[i] = 1.0 / k[i];
        const std::span<const double> ik(inv.data(), n);
        const double f = inner_->value(ik);
        inner_->gradient(ik, out);
        for (int i = 0; i < n; ++i) out[i] *= inv[i] * inv[i] / (f * f);
    }

    std::shared_ptr<const CurvatureImpl> resized(int m) const override {
        return std::make_shared<Dual>(inner_->resized(m));
    }

    const CurvatureImpl& inner() const { return *inner_; }

private:
    std::shared_ptr<const CurvatureImpl> inner_;
};

Convexity dual_convexity(const CurvatureImpl& inner) {
    if (const auto* d = dynamic_cast<const Dual*>(&inner)) return d->inner().convexity;
    if (inner.convexity == Convexity::Convex || inner.convexity == Convexity::Linear) return Convexity::Concave;
    return Convexity::Unclassified;
}

void require_dimension(int n) {
    if (n < 1 || n > kMaxDimension)
        throw DomainError("curvature function dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
}

}  // namespace
}  // namespace detail

CurvatureFunction::CurvatureFunction(std::shared_ptr<const detail::CurvatureImpl> impl) : impl_(std::move(impl)) {}

int CurvatureFunction::dimension() const noexcept { return impl_->n; }
Convexity CurvatureFunction::convexity() const noexcept { return impl_->convexity; }
const std::string& CurvatureFunction::label() const noexcept { return impl_->label; }

namespace {
void check_cone(std::span<const double> kappa, int n) {
    if (static_cast<int>(kappa.size()) != n) throw DomainError("kappa has wrong dimension");
    for (double k : kappa)
        if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("kappa is not in the positive cone");
}
}  // namespace

double CurvatureFunction::value(std::span<const double> kappa) const {
    check_cone(kappa, impl_->n);
    return impl_->value(kappa);
}

void CurvatureFunction::gradient(std::span<const double> kappa, std::span<double> out) const {
    check_cone(kappa, impl_->n);
    if (static_cast<int>(out.size()) < impl_->n) throw DomainError("gradient output too small");
    impl_->gradient(kappa, out);
}

std::vector<double> CurvatureFunction::gradient(std::span<const double> kappa) const {
    std::vector<double> out(impl_->n);
    gradient(kappa, std::span<double>(out));
    return out;
}

double CurvatureFunction::value_unchecked(std::span<const double> kappa) const { return impl_->value(kappa); }

void CurvatureFunction::gradient_unchecked(std::span<const double> kappa, std::span<double> out) const {
    impl_->gradient(kappa, out);
}

CurvatureFunction CurvatureFunction::with_dimension(int n) const {
    detail::require_dimension(n);
    if (n == impl_->n) return *this;
    return CurvatureFunction(impl_->resized(n));
}

CurvatureFunction power_mean(double p, int n) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("power mean exponent must be >= 1");
    detail::require_dimension(n);
    return CurvatureFunction(std::make_shared<detail::PowerMean>(p, n));
}

CurvatureFunction geometric_mean(int n) {
    detail::require_dimension(n);
    return CurvatureFunction(std::make_shared<detail::GeometricMean>(n));
}

CurvatureFunction dual(const CurvatureFunction& f) {
    return CurvatureFunction(std::make_shared<detail::Dual>(f.shared_impl()));
}

CurvatureFunction parse_curvature_function(const std::string& name, int n) {
    if (name == "geo") return geometric_mean(n);
    if (name == "pm:1") return power_mean(1.0, n);
    if (name == "pm:2") return power_mean(2.0, n);
    if (name == "pm:4") return power_mean(4.0, n);
    if (name == "pm:8") return power_mean(8.0, n);
    throw DomainError("unknown curvature function '" + name + "' (expected pm:1, pm:2, pm:4, pm:8 or geo)");
}

}  // namespace dualflow

namespace dualflow {

bool PropertyReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.violations == 0; });
}

const InequalityCheck* PropertyReport::find(const std::string& prefix) const {
    for (const auto& c : checks)
        if (c.name.rfind(prefix, 0) == 0) return &c;
    return nullptr;
}

namespace {

class CheckTable {
public:
    CheckTable(std::vector<std::string> names, double tol) : tol_(tol) {
        for (auto& name : names) {
            InequalityCheck c;
            c.name = std::move(name);
            c.min_margin = std::numeric_limits<double>::infinity();
            checks_.push_back(std::move(c));
        }
    }

    void record(std::size_t i, double margin, std::span<const double> kappa) {
        InequalityCheck& c = checks_[i];
        if (!(margin >= -tol_)) ++c.violations;
        if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
        if (margin < c.min_margin) {
            c.min_margin = margin;
            c.worst_kappa.assign(kappa.begin(), kappa.end());
        }
    }

    std::vector<InequalityCheck> take() { return std::move(checks_); }

private:
    double tol_;
    std::vector<InequalityCheck> checks_;
};

enum CheckId : std::size_t {
    kMeanBelowF,
    kFBelowMax,
    kSumGradAtMostOne,
    kGradOrdered,
    kEuler,
    kMaxOverNBelowF,
    kFBelowNFnKn,
    kFnLower,
    kFnUpper,
    kDualSumLower,
    kDualSumIdentity,
    kDualSumBelowRatio,
    kRatioBelowN,
    kSumGradLower,
    kSumGradAboveRatio,
    kConvexF,
    kConcaveDual,
};

}  // namespace

PropertyReport property_suite(const CurvatureFunction& f, std::int64_t sample_count, std::uint64_t seed,
                              int segment_count) {
    const int n = f.dimension();
    const CurvatureFunction fd = dual(f);
    PropertyReport report;
    report.function_label = f.label();
    report.dimension = n;
    report.samples = sample_count;

    CheckTable table(
        {
            "H/n <= F",
            "F <= kappa_n",
            "sum F_i <= 1",
            "F_1 <= ... <= F_n",
            "F = sum F_i kappa_i",
            "kappa_n/n <= F",
            "F <= n F_n kappa_n",
            "1/n^2 <= F_n",
            "F_n <= 1",
            "1 <= sum dualF_i",
            "sum dualF_i = F^-2 sum F_i kappa_i^2",
            "sum dualF_i <= kappa_n/F",
            "kappa_n/F <= n",
            "1/n <= sum F_i",
            "F/kappa_n <= sum F_i",
            "convexity of F (midpoint)",
            "concavity of dual F (midpoint)",
        },
        report.tolerance);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logk(std::log(0.1), std::log(10.0));
    auto draw = [&](std::span<double> k) {
        for (int i = 0; i < n; ++i) k[i] = std::exp(logk(rng));
    };

    std::array<double, kMaxDimension> kb{}, gb{}, ib{}, dgb{};
    const std::span<double> k(kb.data(), n), g(gb.data(), n), inv(ib.data(), n), dg(dgb.data(), n);
    const double dn = n;

    for (std::int64_t s = 0; s < sample_count; ++s) {
        draw(k);
        std::sort(k.begin(), k.end());
        const double F = f.value(k);
        f.gradient(k, g);
        double H = 0.0, sum_g = 0.0, euler = 0.0, sum_gk2 = 0.0;
        for (int i = 0; i < n; ++i) {
            H += k[i];
            sum_g += g[i];
            euler += g[i] * k[i];
            sum_gk2 += g[i] * k[i] * k[i];
        }
        const double kn = k[n - 1];
        const double Fn = g[n - 1];
        double ordered = std::numeric_limits<double>::infinity();
        for (int i = 0; i + 1 < n; ++i) ordered = std::min(ordered, g[i + 1] - g[i]);

        for (int i = 0; i < n; ++i) inv[i] = 1.0 / k[i];
        fd.gradient(inv, dg);
        double sum_dg = 0.0;
        for (int i = 0; i < n; ++i) sum_dg += dg[i];

        table.record(kMeanBelowF, (F - H / dn) / F, k);
        table.record(kFBelowMax, (kn - F) / F, k);
        table.record(kSumGradAtMostOne, 1.0 - sum_g, k);
        table.record(kGradOrdered, ordered, k);
        table.record(kEuler, -std::abs(F - euler) / F, k);
        table.record(kMaxOverNBelowF, (F - kn / dn) / F, k);
        table.record(kFBelowNFnKn, (dn * Fn * kn - F) / F, k);
        table.record(kFnLower, Fn - 1.0 / (dn * dn), k);
        table.record(kFnUpper, 1.0 - Fn, k);
        table.record(kDualSumLower, sum_dg - 1.0, k);
        table.record(kDualSumIdentity, -std::abs(sum_dg - sum_gk2 / (F * F)) / sum_dg, k);
        table.record(kDualSumBelowRatio, (kn / F - sum_dg) / dn, k);
        table.record(kRatioBelowN, (dn - kn / F) / dn, k);
        table.record(kSumGradLower, sum_g - 1.0 / dn, k);
        table.record(kSumGradAboveRatio, sum_g - F / kn, k);
    }

    std::array<double, kMaxDimension> ab{}, bb{}, mb{};
    const std::span<double> a(ab.data(), n), b(bb.data(), n), m(mb.data(), n);
    for (int s = 0; s < segment_count; ++s) {
        draw(a);
        draw(b);
        for (int i = 0; i < n; ++i) m[i] = 0.5 * (a[i] + b[i]);
        const double fa = f.value(a), fb = f.value(b), fm = f.value(m);
        table.record(kConvexF, (0.5 * (fa + fb) - fm) / fm, m);
        const double da = fd.value(a), db = fd.value(b), dm = fd.value(m);
        table.record(kConcaveDual, (dm - 0.5 * (da + db)) / dm, m);
    }

    report.checks = table.take();
    return report;
}

}  // namespace dualflow
