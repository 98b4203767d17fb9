#include "extann/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace extann {

DistortionGauge DistortionGauge::identity() {
    DistortionGauge g;
    g.family_ = Family::Identity;
    g.phi_ = [](double t) { return t; };
    g.dphi_ = [](double) { return 1.0; };
    g.ddphi_ = [](double) { return 0.0; };
    g.bounded_ = true;
    g.dphi_limit_ = 1.0;
    g.name_ = "identity";
    return g;
}

DistortionGauge DistortionGauge::power(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("power gauge requires p > 1");
    DistortionGauge g;
    g.family_ = Family::Power;
    g.param_ = p;
    g.phi_ = [p](double t) { return std::pow(t, p); };
    g.dphi_ = [p](double t) { return p * std::pow(t, p - 1.0); };
    g.ddphi_ = [p](double t) { return p * (p - 1.0) * std::pow(t, p - 2.0); };
    g.bounded_ = false;
    g.dphi_limit_ = std::numeric_limits<double>::infinity();
    g.name_ = "power:" + std::to_string(p);
    return g;
}

DistortionGauge DistortionGauge::linear_log() {
    DistortionGauge g;
    g.family_ = Family::LinearLog;
    g.phi_ = [](double t) { return t - std::log(t); };
    g.dphi_ = [](double t) { return 1.0 - 1.0 / t; };
    g.ddphi_ = [](double t) { return 1.0 / (t * t); };
    g.bounded_ = true;
    g.dphi_limit_ = 1.0;
    g.name_ = "linear-log";
    return g;
}

DistortionGauge DistortionGauge::shifted_power(double p) {
    if (!(p > 0.0) || p == 1.0)
        throw std::invalid_argument("shifted power gauge requires p > 0, p != 1");
    DistortionGauge g;
    g.family_ = Family::ShiftedPower;
    g.param_ = p;
    g.phi_ = [p](double t) { return t + std::pow(t, 1.0 - p) / (p - 1.0); };
    g.dphi_ = [p](double t) { return 1.0 - std::pow(t, -p); };
    g.ddphi_ = [p](double t) { return p * std::pow(t, -p - 1.0); };
    g.bounded_ = true;
    g.dphi_limit_ = 1.0;
    g.name_ = "shifted-power:" + std::to_string(p);
    return g;
}

DistortionGauge DistortionGauge::custom(std::function<double(double)> phi,
                                        std::function<double(double)> dphi,
                                        std::function<double(double)> ddphi,
                                        bool derivative_bounded, double dphi_limit,
                                        bool sublinear, std::string name) {
    DistortionGauge g;
    g.family_ = Family::Custom;
    g.phi_ = std::move(phi);
    g.dphi_ = std::move(dphi);
    g.ddphi_ = std::move(ddphi);
    g.bounded_ = derivative_bounded;
    g.dphi_limit_ = dphi_limit;
    g.sublinear_ = sublinear;
    g.name_ = std::move(name);
    return g;
}

WeightFunction WeightFunction::constant(double c, double ell) {
    if (!(c > 0.0)) throw std::invalid_argument("weight must be positive");
    WeightFunction w;
    w.f_ = [c](double) { return c; };
    w.ell_ = ell;
    w.lambda0_ = c;
    w.x0_ = 0.0;
    w.name_ = "constant:" + std::to_string(c);
    return w;
}

WeightFunction WeightFunction::nitsche(double ell) {
    WeightFunction w;
    w.f_ = [](double x) { return std::exp(4.0 * M_PI * x); };
    w.ell_ = ell;
    w.lambda0_ = 1.0;
    w.x0_ = 0.0;
    w.name_ = "nitsche";
    return w;
}

WeightFunction WeightFunction::power_well(double s, double ell) {
    if (!(s > 0.0)) throw std::invalid_argument("power_well: s must be positive");
    WeightFunction w;
    const double mid = 0.5 * ell;
    w.f_ = [s, mid](double x) { return 1.0 + std::pow(std::abs(x - mid), 2.0 * s); };
    w.ell_ = ell;
    w.lambda0_ = 1.0;
    w.x0_ = mid;
    w.name_ = "power-well:" + std::to_string(s);
    return w;
}

WeightFunction WeightFunction::from_table(const std::vector<std::pair<double, double>>& xy,
                                          double ell) {
    if (xy.size() < 2) throw std::invalid_argument("weight table needs at least two rows");
    auto table = xy;
    std::sort(table.begin(), table.end());
    for (const auto& [x, v] : table)
        if (!(v > 0.0)) throw std::invalid_argument("weight table values must be positive");
    WeightFunction w;
    w.f_ = [table](double x) {
        if (x <= table.front().first) return table.front().second;
        if (x >= table.back().first) return table.back().second;
        auto hi = std::upper_bound(table.begin(), table.end(), std::make_pair(x, 0.0));
        auto lo = hi - 1;
        const double t = (x - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    };
    w.ell_ = ell;
    w.name_ = "table";
    w.locate_minimum();
    return w;
}

WeightFunction WeightFunction::custom(std::function<double(double)> f, double ell,
                                      std::string name) {
    WeightFunction w;
    w.f_ = std::move(f);
    w.ell_ = ell;
    w.name_ = std::move(name);
    w.locate_minimum();
    return w;
}

void WeightFunction::locate_minimum() {
    // Scan then golden-section refine around the best sample.
    const int n = 4096;
    double best = f_(0.0), best_x = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double x = ell_ * i / n;
        const double v = f_(x);
        if (!(v > 0.0)) throw std::invalid_argument("weight must be positive on [0, ell]");
        if (v < best) {
            best = v;
            best_x = x;
        }
    }
    double lo = std::max(0.0, best_x - ell_ / n);
    double hi = std::min(ell_, best_x + ell_ / n);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = f_(c), fd = f_(d);
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, ell_); ++it) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f_(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f_(d);
        }
    }
    const double candidates[] = {0.5 * (lo + hi), lo, hi, best_x, 0.0, ell_};
    x0_ = candidates[0];
    lambda0_ = f_(x0_);
    for (double x : candidates) {
        const double v = f_(x);
        if (v < lambda0_) {
            lambda0_ = v;
            x0_ = x;
        }
    }
}

}  // namespace extann
