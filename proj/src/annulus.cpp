#include "extann/annulus.hpp"

#include <cmath>

namespace extann {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Conformal: return "Conformal";
        case Regime::Expanding: return "Expanding";
        case Regime::ContractingWithinNitsche: return "ContractingWithinNitsche";
        case Regime::BeyondNitsche: return "BeyondNitsche";
    }
    return "?";
}

namespace {

// a <= b up to relative tolerance on O(1) ratio quantities.
bool leq_tol(double a, double b) {
    return a <= b + kRegimeRatioTol * std::max(std::abs(a), std::abs(b));
}

bool eq_tol(double a, double b) {
    return std::abs(a - b) <= kRegimeRatioTol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

bool nitsche_bound_holds(const Annulus& dom, const Annulus& tgt) {
    const double k = dom.ratio();
    return leq_tol(0.5 * (k + 1.0 / k), tgt.ratio());
}

Regime classify_regime(const Annulus& dom, const Annulus& tgt) {
    const double k = dom.ratio();
    const double k_star = tgt.ratio();
    if (eq_tol(k_star, k)) return Regime::Conformal;
    if (k_star > k) return Regime::Expanding;
    if (leq_tol(0.5 * (k + 1.0 / k), k_star)) return Regime::ContractingWithinNitsche;
    return Regime::BeyondNitsche;
}

}  // namespace extann
