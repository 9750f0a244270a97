#include "frontlab/model.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "frontlab/errors.hpp"

namespace frontlab::model {

namespace {
constexpr double kSampleStep = 1e-3;
}

NonlinearityFamily::NonlinearityFamily(NonlinearityKind kind, double s,
                                       std::array<double, 3> coeffs)
    : kind_(kind), s_(s), coeffs_(coeffs) {}

NonlinearityFamily NonlinearityFamily::fisher_kpp() {
    return NonlinearityFamily(NonlinearityKind::fisher_kpp, 0.0, {1.0, -1.0, 0.0});
}

NonlinearityFamily NonlinearityFamily::hadeler_rothe(double s) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
        throw contract_error("hadeler_rothe: family parameter s must be finite and >= 0");
    }
    // w(1-w)(1+sw) = w + (s-1) w^2 - s w^3
    return NonlinearityFamily(NonlinearityKind::hadeler_rothe, s, {1.0, s - 1.0, -s});
}

NonlinearityFamily NonlinearityFamily::custom_cubic(const std::array<double, 3>& coeffs) {
    NonlinearityFamily fam(NonlinearityKind::custom_cubic, 0.0, coeffs);
    fam.validate();
    return fam;
}

void NonlinearityFamily::validate() const {
    const double c1 = coeffs_[0], c2 = coeffs_[1], c3 = coeffs_[2];
    const double scale = std::abs(c1) + std::abs(c2) + std::abs(c3);
    if (scale == 0.0 || !std::isfinite(scale)) {
        throw contract_error("custom_cubic: degenerate coefficient list");
    }
    if (std::abs(c1 + c2 + c3) > 1e-12 * scale) {
        throw contract_error("custom_cubic: f(1) != 0");
    }
    if (!(fp(0.0) > 0.0) || !(fp(1.0) < 0.0)) {
        throw contract_error("custom_cubic: requires f'(0) > 0 > f'(1)");
    }
    for (double w = kSampleStep; w < 1.0; w += kSampleStep) {
        if (!(f(w) > 0.0)) {
            throw contract_error("custom_cubic: f not positive on (0,1)");
        }
    }
}

double NonlinearityFamily::f(double w) const {
    assert(w >= -0.1 - 1e-9 && w <= 1.5 + 1e-9);
    switch (kind_) {
        case NonlinearityKind::fisher_kpp:
            return w * (1.0 - w);
        case NonlinearityKind::hadeler_rothe:
            return w * (1.0 - w) * (1.0 + s_ * w);
        case NonlinearityKind::custom_cubic:
            return w * (coeffs_[0] + w * (coeffs_[1] + w * coeffs_[2]));
    }
    return 0.0;
}

double NonlinearityFamily::fp(double w) const {
    switch (kind_) {
        case NonlinearityKind::fisher_kpp:
            return 1.0 - 2.0 * w;
        case NonlinearityKind::hadeler_rothe:
            return (1.0 - 2.0 * w) * (1.0 + s_ * w) + s_ * w * (1.0 - w);
        case NonlinearityKind::custom_cubic:
            return coeffs_[0] + w * (2.0 * coeffs_[1] + w * 3.0 * coeffs_[2]);
    }
    return 0.0;
}

double NonlinearityFamily::fpp(double w) const {
    switch (kind_) {
        case NonlinearityKind::fisher_kpp:
            return -2.0;
        case NonlinearityKind::hadeler_rothe:
            return -2.0 * (1.0 + s_ * w) + 2.0 * s_ * (1.0 - 2.0 * w);
        case NonlinearityKind::custom_cubic:
            return 2.0 * coeffs_[1] + 6.0 * coeffs_[2] * w;
    }
    return 0.0;
}

double NonlinearityFamily::sup_fp() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double w = 0.0; w <= 1.0 + 0.5 * kSampleStep; w += kSampleStep) {
        m = std::max(m, fp(w));
    }
    return m;
}

bool NonlinearityFamily::kpp_condition() const {
    const double g0 = fp0();
    for (double w = 0.0; w <= 1.0 + 0.5 * kSampleStep; w += kSampleStep) {
        if (g0 * w < f(w) - 1e-12) return false;
    }
    return true;
}

std::string NonlinearityFamily::kind_name() const {
    switch (kind_) {
        case NonlinearityKind::fisher_kpp: return "fisher_kpp";
        case NonlinearityKind::hadeler_rothe: return "hadeler_rothe";
        case NonlinearityKind::custom_cubic: return "custom_cubic";
    }
    return "?";
}

LVParams::LVParams(double a_, double b_, double d_, double r_) : a(a_), b(b_), d(d_), r(r_) {
    if (!(a > 0.0 && b > 0.0 && d > 0.0 && r > 0.0)) {
        throw contract_error("LVParams: all of a, b, d, r must be strictly positive");
    }
}

std::pair<double, double> LVParams::equilibrium() const {
    if (b >= 1.0) return {1.0, 0.0};
    if (a * b >= 1.0) {
        throw contract_error("LVParams: coexistence equilibrium requires ab < 1 when b < 1");
    }
    const double den = 1.0 - a * b;
    return {(1.0 - a) / den, (1.0 - b) / den};
}

KernelSpec::KernelSpec(KernelShape shape, double half_width, double h,
                       std::vector<double> samples)
    : shape_(shape),
      half_width_(half_width),
      h_(h),
      half_points_(static_cast<int>(std::lround(half_width / h))),
      samples_(std::move(samples)) {
    normalize_and_validate();
}

KernelSpec KernelSpec::uniform(double half_width, double h) {
    if (!(half_width > 0.0) || !(h > 0.0)) {
        throw contract_error("KernelSpec: half_width and spacing must be positive");
    }
    const int k = static_cast<int>(std::lround(half_width / h));
    std::vector<double> s(2 * k + 1, 1.0 / (2.0 * half_width));
    return KernelSpec(KernelShape::uniform, half_width, h, std::move(s));
}

KernelSpec KernelSpec::parabolic_bump(double half_width, double h) {
    if (!(half_width > 0.0) || !(h > 0.0)) {
        throw contract_error("KernelSpec: half_width and spacing must be positive");
    }
    const int k = static_cast<int>(std::lround(half_width / h));
    std::vector<double> s(2 * k + 1);
    for (int j = -k; j <= k; ++j) {
        const double y = j * h / half_width;
        s[j + k] = 0.75 / half_width * (1.0 - y * y);
    }
    s.front() = 0.0;
    s.back() = 0.0;
    return KernelSpec(KernelShape::parabolic_bump, half_width, h, std::move(s));
}

KernelSpec KernelSpec::custom(double half_width, double h, std::vector<double> samples) {
    return KernelSpec(KernelShape::custom_samples, half_width, h, std::move(samples));
}

void KernelSpec::normalize_and_validate() {
    if (std::abs(half_points_ * h_ - half_width_) > 1e-12 * std::max(1.0, half_width_)) {
        throw contract_error("KernelSpec: half_width must be an integer multiple of the grid spacing");
    }
    if (samples_.size() != static_cast<size_t>(2 * half_points_ + 1)) {
        throw contract_error("KernelSpec: sample count must be 2*L/h + 1");
    }
    const int k = half_points_;
    for (int j = 0; j <= k; ++j) {
        const double lhs = samples_[k - j], rhs = samples_[k + j];
        if (lhs < 0.0 || rhs < 0.0) throw contract_error("KernelSpec: negative sample");
        if (std::abs(lhs - rhs) > 1e-14 * std::max(1.0, std::abs(lhs))) {
            throw contract_error("KernelSpec: samples not symmetric");
        }
    }
    double m = 0.0;
    for (int j = -k; j <= k; ++j) {
        const double theta = (j == -k || j == k) ? 0.5 : 1.0;
        m += theta * samples_[j + k] * h_;
    }
    if (!(m > 0.0)) throw contract_error("KernelSpec: zero mass");
    weights_.resize(samples_.size());
    for (size_t i = 0; i < samples_.size(); ++i) {
        samples_[i] /= m;
        const int j = static_cast<int>(i) - k;
        const double theta = (j == -k || j == k) ? 0.5 : 1.0;
        weights_[i] = theta * samples_[i] * h_;
    }
}

double KernelSpec::mass() const {
    double m = 0.0;
    for (double w : weights_) m += w;
    return m;
}

double eval_reaction(const NonlinearityFamily& family, double w) {
    return family.f(w);
}

std::pair<double, double> lv_reaction(const LVParams& params, double u, double v) {
    return {u * (1.0 - u - params.a * v), params.r * v * (1.0 - v - params.b * u)};
}

double kernel_moment(const KernelSpec& kernel, double lambda) {
    const int k = kernel.half_points();
    const double h = kernel.spacing();
    const auto& w = kernel.weights();
    double acc = 0.0;
    for (int j = -k; j <= k; ++j) {
        acc += w[j + k] * std::exp(lambda * j * h);
    }
    return acc;
}

}  // namespace frontlab::model
