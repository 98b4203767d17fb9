#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace extann {

/// Convex increasing gauge phi on [1, oo) applied to the distortion inside
/// the energy. Boundedness of phi' decides whether the Nitsche phenomenon
/// can occur at all.
class DistortionGauge {
public:
    enum class Family { Identity, Power, LinearLog, ShiftedPower, Custom };

    static DistortionGauge identity();
    static DistortionGauge power(double p);          // phi = t^p, p > 1
    static DistortionGauge linear_log();             // phi = t - log t
    static DistortionGauge shifted_power(double p);  // phi = t + t^{1-p}/(p-1), p > 0, p != 1
    static DistortionGauge custom(std::function<double(double)> phi,
                                  std::function<double(double)> dphi,
                                  std::function<double(double)> ddphi,
                                  bool derivative_bounded, double dphi_limit,
                                  bool sublinear = false,
                                  std::string name = "custom");

    double phi(double t) const { return phi_(t); }
    double dphi(double t) const { return dphi_(t); }
    double ddphi(double t) const { return ddphi_(t); }

    bool derivative_bounded() const { return bounded_; }
    /// lim_{t->oo} phi'(t) for bounded-derivative gauges.
    double dphi_limit() const { return dphi_limit_; }
    bool sublinear() const { return sublinear_; }

    Family family() const { return family_; }
    double param() const { return param_; }
    const std::string& name() const { return name_; }

private:
    Family family_ = Family::Custom;
    double param_ = 0.0;
    std::function<double(double)> phi_, dphi_, ddphi_;
    bool bounded_ = true;
    double dphi_limit_ = 1.0;
    bool sublinear_ = false;
    std::string name_;
};

/// Positive piecewise-continuous weight on [0, ell], with its minimum cached.
class WeightFunction {
public:
    static WeightFunction constant(double c, double ell);
    static WeightFunction nitsche(double ell);  // e^{4 pi x}, minimum at x = 0
    static WeightFunction power_well(double s, double ell);  // 1 + |x - ell/2|^{2s}
    static WeightFunction from_table(const std::vector<std::pair<double, double>>& xy,
                                     double ell);  // linear interpolation, clamped
    static WeightFunction custom(std::function<double(double)> f, double ell,
                                 std::string name = "custom");

    double operator()(double x) const { return f_(x); }
    double ell() const { return ell_; }
    double min_value() const { return lambda0_; }
    double argmin() const { return x0_; }
    const std::string& name() const { return name_; }

private:
    WeightFunction() = default;
    void locate_minimum();

    std::function<double(double)> f_;
    double ell_ = 1.0;
    double lambda0_ = 0.0;
    double x0_ = 0.0;
    std::string name_;
};

}  // namespace extann
