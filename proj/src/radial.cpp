#include "extann/radial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "extann/errors.hpp"
#include "extann/quadrature.hpp"

namespace extann {

double RadialProfile::value(double t) const {
    switch (kind_) {
        case ProfileKind::Harmonic:
            return a_ * t + b_ / t;
        case ProfileKind::BeyondNitsche:
            if (t <= rho_) return r_star_;
            return a_ * t + b_ / t;
        case ProfileKind::PowerStretch:
            return std::pow(t, alpha_);
    }
    return 0.0;
}

double RadialProfile::derivative(double t) const {
    switch (kind_) {
        case ProfileKind::Harmonic:
            return a_ - b_ / (t * t);
        case ProfileKind::BeyondNitsche:
            if (t <= rho_) return 0.0;
            return a_ - b_ / (t * t);
        case ProfileKind::PowerStretch:
            return alpha_ * std::pow(t, alpha_ - 1.0);
    }
    return 0.0;
}

bool RadialProfile::strictly_increasing() const {
    if (kind_ == ProfileKind::PowerStretch) return alpha_ > 0.0;
    if (kind_ == ProfileKind::BeyondNitsche) return false;
    // Harmonic: H' is smallest at t_min; allow an exactly saturated bound.
    return derivative(t_min_) >= -1e-14;
}

RadialProfile RadialProfile::make_harmonic(double a, double b, double t_min, double t_max) {
    RadialProfile p;
    p.kind_ = ProfileKind::Harmonic;
    p.a_ = a;
    p.b_ = b;
    p.t_min_ = t_min;
    p.t_max_ = t_max;
    return p;
}

RadialProfile RadialProfile::make_beyond_nitsche(double r_star, double rho, double t_max) {
    RadialProfile p;
    p.kind_ = ProfileKind::BeyondNitsche;
    p.r_star_ = r_star;
    p.rho_ = rho;
    p.t_min_ = 1.0;
    p.t_max_ = t_max;
    // Rising piece H_rho(t) = (r*/2)(t/rho + rho/t), harmonic with:
    p.a_ = 0.5 * r_star / rho;
    p.b_ = 0.5 * r_star * rho;
    return p;
}

RadialProfile RadialProfile::make_power_stretch(double alpha, double t_min, double t_max) {
    RadialProfile p;
    p.kind_ = ProfileKind::PowerStretch;
    p.alpha_ = alpha;
    p.t_min_ = t_min;
    p.t_max_ = t_max;
    return p;
}

RadialProfile harmonic_radial(const Annulus& dom, const Annulus& tgt) {
    const Regime regime = classify_regime(dom, tgt);
    if (regime == Regime::BeyondNitsche)
        throw RegimeError("harmonic_radial: pair beyond the Nitsche bound, H' would change sign");
    const Annulus d = dom.normalized();
    const Annulus s = tgt.normalized();
    const double r = d.r_inner(), R = d.r_outer();
    const double rs = s.r_inner(), Rs = s.r_outer();
    const double denom = R * R - r * r;
    const double a = (R * Rs - r * rs) / denom;
    const double b = (R * R * r * rs - r * r * R * Rs) / denom;
    return RadialProfile::make_harmonic(a, b, r, R);
}

RadialProfile beyond_nitsche_profile(const Annulus& dom, const Annulus& tgt) {
    if (classify_regime(dom, tgt) != Regime::BeyondNitsche)
        throw RegimeError("beyond_nitsche_profile: pair within the Nitsche range");
    const double R = dom.ratio();
    const double k = tgt.ratio();
    // rho = R (k - sqrt(k^2-1)); rewritten for large k to avoid cancellation.
    const double root = std::sqrt(k * k - 1.0);
    const double rho = (k > 2.0) ? R / (k + root) : R * (k - root);
    return RadialProfile::make_beyond_nitsche(1.0, rho, R);
}

CharacteristicConstant characteristic_constant(const RadialProfile& p) {
    double c;
    switch (p.kind()) {
        case ProfileKind::Harmonic:
            c = 4.0 * p.coef_a() * p.coef_b();
            break;
        case ProfileKind::BeyondNitsche:
            // Plateau: H = r*, H' = 0 gives c = r*^2; the rising piece has
            // 4ab = r*^2 as well, so the constant is global.
            c = p.plateau_value() * p.plateau_value();
            break;
        case ProfileKind::PowerStretch:
            if (p.alpha() == 1.0) {
                c = 0.0;
                break;
            }
            throw DomainError("characteristic_constant: power stretch does not satisfy the characteristic equation");
    }
    double max_dev = 0.0;
    const int n = 1000;
    for (int i = 0; i <= n; ++i) {
        const double t = p.t_min() + (p.t_max() - p.t_min()) * i / n;
        const double H = p.value(t);
        const double Hd = p.derivative(t);
        const double res = H * H - t * t * Hd * Hd - c;
        max_dev = std::max(max_dev, std::abs(res) / (1.0 + std::abs(c)));
    }
    if (max_dev > 1e-9)
        throw NonConstantError("characteristic_constant: sampled residual " +
                               std::to_string(max_dev) + " exceeds 1e-9");
    return {c, max_dev};
}

double elasticity(const RadialProfile& p, double t) {
    if (t < p.t_min() * (1.0 - 1e-12) || t > p.t_max() * (1.0 + 1e-12))
        throw DomainError("elasticity: t outside the profile domain");
    return t * p.derivative(t) / p.value(t);
}

InverseProfile::InverseProfile(const RadialProfile& p, double c)
    : profile_(p), c_(c) {
    if (p.kind() == ProfileKind::PowerStretch) {
        power_ = true;
        tau_min_ = p.value(p.t_min());
        tau_max_ = p.value(p.t_max());
        a_ = 0.0;
        return;
    }
    a_ = p.coef_a();
    if (p.kind() == ProfileKind::BeyondNitsche) {
        tau_min_ = p.plateau_value();
        tau_max_ = p.value(p.t_max());
    } else {
        tau_min_ = p.value(p.t_min());
        tau_max_ = p.value(p.t_max());
    }
}

double InverseProfile::value(double tau) const {
    if (power_) return std::pow(tau, 1.0 / profile_.alpha());
    return (tau + std::sqrt(std::max(tau * tau - c_, 0.0))) / (2.0 * a_);
}

double InverseProfile::derivative(double tau) const {
    if (power_) {
        const double inv = 1.0 / profile_.alpha();
        return inv * std::pow(tau, inv - 1.0);
    }
    const double root = std::sqrt(std::max(tau * tau - c_, 0.0));
    return (1.0 + tau / root) / (2.0 * a_);
}

InverseProfile inverse_profile(const RadialProfile& p) {
    if (p.kind() == ProfileKind::PowerStretch)
        return InverseProfile(p, 0.0);
    if (p.kind() == ProfileKind::BeyondNitsche) {
        // A genuine plateau squeezes a whole ring to one circle, so the map
        // has no inverse; only a degenerate plateau (rho at the inner edge)
        // leaves the rising piece, which does invert.
        if (p.rho() > p.t_min())
            throw NotInvertibleError(
                "inverse_profile: plateau collapses a ring to a circle");
        return InverseProfile(p, p.plateau_value() * p.plateau_value());
    }
    if (!p.strictly_increasing())
        throw NotInvertibleError("inverse_profile: profile is not monotone on its domain");
    return InverseProfile(p, 4.0 * p.coef_a() * p.coef_b());
}

ExpandingCoefficients expanding_coefficients(const InverseProfile& ip, double t, double tau) {
    if (ip.characteristic() >= 0.0)
        throw RegimeError("expanding_coefficients: requires c < 0");
    const double F = ip.value(tau);
    const double Fd = ip.derivative(tau);
    return {tau * Fd / F, F / (t * Fd)};
}

ContractingCoefficients contracting_coefficients(const InverseProfile& ip, double t, double tau) {
    if (ip.characteristic() <= 0.0)
        throw RegimeError("contracting_coefficients: requires c > 0");
    const double F = ip.value(tau);
    const double Fd = ip.derivative(tau);
    const double q = F / (tau * Fd);
    const RadialProfile& p = ip.profile();
    const double H = p.value(t);
    const double Hd = p.derivative(t);
    const double B = (H * H / t - t * Hd * Hd) / (tau * (1.0 - q * q));
    return {q, B};
}

RadialEnergy radial_dirichlet_energy(const RadialProfile& p) {
    const double r = p.t_min(), R = p.t_max();
    const double quad = 2.0 * M_PI * integrate(
        [&p](double t) {
            const double H = p.value(t);
            const double Hd = p.derivative(t);
            return (Hd * Hd + H * H / (t * t)) * t;
        },
        r, R, 1e-12, 1e-12);

    // (H'^2 + H^2/t^2) t for H = a t + b/t reduces to 2 a^2 t + 2 b^2 / t^3;
    // the cross terms cancel. Antiderivative: a^2 t^2 - b^2 / t^2.
    auto harmonic_piece = [](double a, double b, double lo, double hi) {
        return a * a * (hi * hi - lo * lo) + b * b * (1.0 / (lo * lo) - 1.0 / (hi * hi));
    };
    double closed = 0.0;
    switch (p.kind()) {
        case ProfileKind::Harmonic:
            closed = harmonic_piece(p.coef_a(), p.coef_b(), r, R);
            break;
        case ProfileKind::BeyondNitsche: {
            const double rs = p.plateau_value();
            closed = rs * rs * std::log(p.rho() / r) +
                     harmonic_piece(p.coef_a(), p.coef_b(), p.rho(), R);
            break;
        }
        case ProfileKind::PowerStretch: {
            const double al = p.alpha();
            closed = (al * al + 1.0) / (2.0 * al) * (std::pow(R, 2.0 * al) - std::pow(r, 2.0 * al));
            break;
        }
    }
    closed *= 2.0 * M_PI;
    return {quad, closed};
}

PowerStretchResult power_stretch_extremal(const Annulus& dom, const Annulus& tgt) {
    const double alpha = tgt.modulus() / dom.modulus();
    const Annulus d = dom.normalized();
    RadialProfile profile = RadialProfile::make_power_stretch(alpha, d.r_inner(), d.r_outer());
    const double k_lin = std::max(alpha, 1.0 / alpha);
    const double k_dist = (alpha * alpha + 1.0) / (2.0 * alpha);
    return {profile, k_lin, k_dist};
}

}  // namespace extann
