#pragma once

#include <cmath>
#include <stdexcept>

namespace extann {

/// Circular ring domain r_inner < |z| < r_outer.
class Annulus {
public:
    Annulus(double r_inner, double r_outer) : r_(r_inner), R_(r_outer) {
        if (!(r_inner > 0.0) || !(r_outer > 0.0))
            throw std::invalid_argument("Annulus: radii must be positive");
        if (!(r_inner < r_outer))
            throw std::invalid_argument("Annulus: r_inner must be strictly less than r_outer");
    }

    double r_inner() const { return r_; }
    double r_outer() const { return R_; }
    double ratio() const { return R_ / r_; }
    double modulus() const { return std::log(R_ / r_); }
    double area() const { return M_PI * (R_ * R_ - r_ * r_); }

    /// Scale both radii so r_inner = 1. All functionals in scope are
    /// scale invariant; original radii are kept by the caller for reporting.
    Annulus normalized() const { return Annulus(1.0, R_ / r_); }

private:
    double r_;
    double R_;
};

/// Rectangle [0,length] x [0,1]; the height is fixed to 1 throughout.
class Rectangle {
public:
    explicit Rectangle(double length) : length_(length) {
        if (!(length > 0.0))
            throw std::invalid_argument("Rectangle: length must be positive");
    }
    double length() const { return length_; }
    static constexpr double height() { return 1.0; }

private:
    double length_;
};

enum class Regime {
    Conformal,
    Expanding,
    ContractingWithinNitsche,
    BeyondNitsche,
};

const char* to_string(Regime r);

/// Relative tolerance for ratio comparisons at regime boundaries.
inline constexpr double kRegimeRatioTol = 1e-12;

/// True iff (R/r + r/R)/2 <= R*/r*, i.e. an injective radial harmonic
/// minimizer between the annuli exists. Bound saturation counts as inside.
bool nitsche_bound_holds(const Annulus& dom, const Annulus& tgt);

Regime classify_regime(const Annulus& dom, const Annulus& tgt);

}  // namespace extann
