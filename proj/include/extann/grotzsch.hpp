#pragma once

#include <limits>
#include <vector>

#include "extann/gauge.hpp"
#include "extann/grid.hpp"

namespace extann {

struct GrotzschProblem {
    double ell;
    double L;
    DistortionGauge gauge;
    WeightFunction weight;
};

enum class Verdict { MinimizerExists, NitschePhenomenon, IdentityCase };

const char* to_string(Verdict v);

struct ProfileSample {
    double x;
    double u;
    double u_x;
};

/// Solved shear profile u on [0, ell] for a weight/gauge pair at parameter
/// alpha; f0(z) = u(x) + iy is the candidate minimizer.
struct GrotzschSolution {
    double alpha = 0.0;
    double ell = 0.0;
    double L_target = 0.0;
    double L_achieved = 0.0;
    Verdict verdict = Verdict::MinimizerExists;
    double L0 = std::numeric_limits<double>::infinity();  // critical length
    std::vector<ProfileSample> samples;
    double max_ode_residual = 0.0;  // of lambda (1 - 1/u_x^2) phi'(u_x + 1/u_x) = alpha
};

/// G(t) = (1 - 1/t^2) phi'(t + 1/t); strictly increasing, zero at t = 1.
double gauge_response(const DistortionGauge& gauge, double t);

/// sup_t G(t): +inf for unbounded phi', else lim phi'.
double gauge_response_sup(const DistortionGauge& gauge);

/// The unique t > 0 with G(t) = alpha / lambda(x). Throws SlopeSaturated
/// when the target reaches or exceeds sup G.
double solve_pointwise_slope(const DistortionGauge& gauge, const WeightFunction& weight,
                             double alpha, double x);

/// Profile for a fixed alpha (no boundary shooting, no verdict).
GrotzschSolution profile_from_alpha(const GrotzschProblem& problem, double alpha,
                                    int n_samples = 1001);

/// Shoot on alpha to match u(ell) = L. The verdict encodes non-existence:
/// bounded gauges with L beyond the critical length report NitschePhenomenon
/// and attach the critical profile.
GrotzschSolution solve_boundary(const GrotzschProblem& problem, int n_samples = 1001);

/// L0 = integral of the critical slope; +inf when the improper integral
/// diverges (then every L is attainable). Throws InconclusiveConvergence
/// if the refinement budget decides neither way.
double critical_length(const GrotzschProblem& problem);

struct PhenomenonRecord {
    bool phenomenon = false;  // false <=> always solvable
    double L0 = std::numeric_limits<double>::infinity();
    // integrand samples approaching the weight minimum, for diagnostics
    std::vector<std::pair<double, double>> diagnostic;
};

PhenomenonRecord classify_phenomenon(const DistortionGauge& gauge,
                                     const WeightFunction& weight, double ell);

/// The minimizing sequence f^j for a problem with no minimizer (L > L0,
/// bounded gauge): the critical inverse profile with a plateau of length
/// L - L0 inserted at the weight minimum, with slopes floored at 1/j.
class DegenerateFamily {
public:
    explicit DegenerateFamily(const GrotzschProblem& problem);

    double L0() const { return L0_; }
    /// The unattainable lower bound: the phi-distortion energy of the
    /// critical profile f_0 (gauge applied to u_x + 1/u_x).
    double unattainable_bound() const { return bound_; }

    /// f^j sampled on an n_x x n_y rectangle grid; admissible homeomorphism.
    RectGridMap map(int j, int n_x, int n_y) const;
    /// Energy of f^j by exact one-dimensional quadrature over the target.
    double energy(int j) const;

private:
    struct VSample {
        double a;
        double v;    // v(a), plateau-inserted inverse profile
        double v_a;  // slope, zero on the plateau
    };
    std::vector<VSample> build_vj(int j, double* scale) const;

    GrotzschProblem problem_;
    double L0_;
    double a0_;  // plateau insertion point u0(x0)
    double bound_;
    std::vector<ProfileSample> critical_;  // u0 samples, refined toward x0
};

struct SublinearDemo {
    double infimum;  // psi(1) * integral of the weight; not attained unless L = ell
    std::vector<int> js;
    std::vector<double> energies;  // two-slope collar family, decreasing to the infimum
};

/// Infimum of the psi(K)-energy for sublinear psi, with a collar-family
/// demonstration that it is approached (psi applied to (s + 1/s)/2).
SublinearDemo sublinear_infimum(const DistortionGauge& psi, const WeightFunction& weight,
                                double ell, double L, const std::vector<int>& js);

struct GapReport {
    double candidate_energy = 0.0;
    double minimizer_energy = 0.0;
    double gap = 0.0;     // candidate - minimizer
    double budget = 0.0;  // discretization allowance
    double shear_identity_residual = 0.0;   // zero-mean identity in f_y
    double x_mean_identity_residual = 0.0;  // zero-mean identity in f_x
    bool pass = false;
};

/// Free-Lagrangian lower-bound check: candidate phi-distortion energy must
/// not undercut the solved minimizer's beyond the discretization budget;
/// also evaluates the two zero-mean boundary identities.
GapReport minimality_gap_bound(const RectGridMap& candidate, const GrotzschSolution& sol,
                               const GrotzschProblem& problem);

}  // namespace extann
