#pragma once

#include <functional>

namespace extann {

/// Adaptive Gauss-Kronrod (7,15) integration of f over [a, b].
/// Throws QuadratureError if the requested tolerance cannot be reached
/// within the subdivision budget.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-10,
                 int max_depth = 60);

enum class TailVerdict {
    Convergent,
    Divergent,
    Inconclusive,
};

struct ImproperResult {
    double value = 0.0;     // meaningful only when Convergent
    TailVerdict verdict = TailVerdict::Inconclusive;
};

/// Integral of f over [a, b] where f may blow up at the endpoint
/// `singularity` (== a or b). The interval is split into dyadic blocks
/// accumulating toward the singular endpoint; each block is integrated
/// adaptively. Convergence is decided by the block-sum ratio test:
/// geometrically decaying block contributions give a convergent tail,
/// non-decaying blocks (|x-x0|^{-s} with s >= 1) give a divergent one.
/// A hard cap on the partial sums also forces a Divergent verdict.
ImproperResult integrate_to_singularity(const std::function<double(double)>& f,
                                        double a, double b, double singularity,
                                        double rel_tol = 1e-10,
                                        double divergence_cap = 1e6);

}  // namespace extann
