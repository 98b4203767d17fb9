#pragma once

#include "extann/annulus.hpp"

namespace extann {

enum class ProfileKind { Harmonic, BeyondNitsche, PowerStretch };

/// A radial stretching H on [t_min, t_max]; the associated planar map is
/// h(x) = H(|x|) x/|x|. Profiles are built on annuli normalized to inner
/// radius 1, so H(1) = 1 for all constructed variants.
class RadialProfile {
public:
    double value(double t) const;       // H(t)
    double derivative(double t) const;  // dH/dt

    ProfileKind kind() const { return kind_; }
    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }

    // Harmonic piece parameters of H(t) = a t + b/t. For BeyondNitsche these
    // describe the rising piece on [rho, t_max].
    double coef_a() const { return a_; }
    double coef_b() const { return b_; }
    double rho() const { return rho_; }      // plateau edge (BeyondNitsche only)
    double alpha() const { return alpha_; }  // exponent (PowerStretch only)
    double plateau_value() const { return r_star_; }

    bool strictly_increasing() const;

    static RadialProfile make_harmonic(double a, double b, double t_min, double t_max);
    static RadialProfile make_beyond_nitsche(double r_star, double rho, double t_max);
    static RadialProfile make_power_stretch(double alpha, double t_min, double t_max);

private:
    RadialProfile() = default;
    ProfileKind kind_ = ProfileKind::Harmonic;
    double t_min_ = 1.0, t_max_ = 1.0;
    double a_ = 1.0, b_ = 0.0;
    double rho_ = 0.0;
    double r_star_ = 1.0;
    double alpha_ = 1.0;
};

/// Harmonic minimizer H(t) = a t + b/t matching the boundary radii.
/// Throws RegimeError for pairs beyond the Nitsche bound (H' would change sign).
RadialProfile harmonic_radial(const Annulus& dom, const Annulus& tgt);

/// Plateau-plus-harmonic profile for pairs beyond the Nitsche bound.
/// Throws RegimeError when the pair is still within the Nitsche range.
RadialProfile beyond_nitsche_profile(const Annulus& dom, const Annulus& tgt);

struct CharacteristicConstant {
    double c;              // H^2 - t^2 H'^2, exact from the coefficients
    double max_deviation;  // max relative residual over a 1000-point grid
};

/// The first-order invariant H^2 - t^2 H'^2 == c. Defined for Harmonic and
/// BeyondNitsche profiles; throws NonConstantError if the sampled residual
/// exceeds 1e-9 relative, DomainError for power stretches with alpha != 1.
CharacteristicConstant characteristic_constant(const RadialProfile& p);

/// Elasticity of stretching t H'(t)/H(t); identically 1 iff conformal.
double elasticity(const RadialProfile& p, double t);

/// F = H^{-1} on [H(t_min), H(t_max)], in closed form.
class InverseProfile {
public:
    InverseProfile(const RadialProfile& p, double c);

    double value(double tau) const;       // F(tau)
    double derivative(double tau) const;  // dF/dtau
    double characteristic() const { return c_; }
    double tau_min() const { return tau_min_; }
    double tau_max() const { return tau_max_; }
    const RadialProfile& profile() const { return profile_; }

private:
    RadialProfile profile_;
    double c_;
    double a_;  // leading harmonic coefficient of the invertible piece
    double tau_min_, tau_max_;
    bool power_ = false;
};

/// Throws NotInvertibleError when the profile has a genuine plateau interior
/// to its domain (only the rising piece of a BeyondNitsche profile inverts).
InverseProfile inverse_profile(const RadialProfile& p);

struct ExpandingCoefficients {
    double p;  // tau F'(tau) / F(tau), in (0,1) for c < 0
    double A;  // F(tau) / (t F'(tau))
};

/// Throws RegimeError unless c < 0 (expanding regime).
ExpandingCoefficients expanding_coefficients(const InverseProfile& ip, double t, double tau);

struct ContractingCoefficients {
    double q;  // F(tau) / (tau F'(tau)), < 1 for c > 0
    double B;
};

/// Throws RegimeError unless c > 0 (contracting regime).
ContractingCoefficients contracting_coefficients(const InverseProfile& ip, double t, double tau);

struct RadialEnergy {
    double quadrature;   // adaptive quadrature of 2*pi*(H'^2 + H^2/t^2) t dt
    double closed_form;  // antiderivative value, exact per variant
};

RadialEnergy radial_dirichlet_energy(const RadialProfile& p);

struct PowerStretchResult {
    RadialProfile profile;
    double k_linear;      // max(alpha, 1/alpha)
    double k_distortion;  // (alpha^2 + 1)/(2 alpha), constant on the annulus
};

/// Extremal map for the maximal-distortion problem: z -> z |z|^{alpha-1}
/// with alpha = Mod(tgt)/Mod(dom), on the normalized domain annulus.
PowerStretchResult power_stretch_extremal(const Annulus& dom, const Annulus& tgt);

}  // namespace extann
