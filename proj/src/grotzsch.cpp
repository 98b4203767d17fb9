#include "extann/grotzsch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "extann/errors.hpp"
#include "extann/quadrature.hpp"

namespace extann {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::MinimizerExists: return "exists";
        case Verdict::NitschePhenomenon: return "phenomenon";
        case Verdict::IdentityCase: return "identity";
    }
    return "?";
}

double gauge_response(const DistortionGauge& gauge, double t) {
    return (1.0 - 1.0 / (t * t)) * gauge.dphi(t + 1.0 / t);
}

double gauge_response_sup(const DistortionGauge& gauge) {
    if (!gauge.derivative_bounded()) return std::numeric_limits<double>::infinity();
    return gauge.dphi_limit();
}

namespace {

double gauge_response_deriv(const DistortionGauge& g, double t) {
    const double u = t + 1.0 / t;
    const double w = 1.0 - 1.0 / (t * t);
    return (2.0 / (t * t * t)) * g.dphi(u) + w * w * g.ddphi(u);
}

// Unique root of G(t) = target; G is strictly increasing with G(1) = 0.
double slope_root(const DistortionGauge& g, double target) {
    if (target == 0.0) return 1.0;
    const double sup = gauge_response_sup(g);
    if (target >= sup)
        throw SlopeSaturated("slope target " + std::to_string(target) +
                             " at or above sup G = " + std::to_string(sup));
    double lo, hi;
    if (target > 0.0) {
        lo = 1.0;
        hi = 2.0;
        while (gauge_response(g, hi) < target) {
            hi *= 4.0;
            if (hi > 1e290)
                throw SlopeSaturated("slope bracket expansion overflow (target too close to sup G)");
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        while (gauge_response(g, lo) > target) {
            lo *= 0.25;
            if (lo < 1e-290)
                throw SlopeSaturated("slope bracket expansion underflow");
        }
    }
    // bisection on log t
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (gauge_response(g, mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    // Newton polish, kept inside the bracket
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        const double gp = gauge_response_deriv(g, t);
        if (gp <= 0.0) break;
        const double step = (gauge_response(g, t) - target) / gp;
        const double next = t - step;
        if (next > lo && next < hi) t = next;
    }
    return t;
}

constexpr double kSlopeCap = 1e12;  // saturated-cell marker for divergence tests

// Slope with the saturated case mapped to a huge finite value, so improper
// integrals over flat weight minima blow past the divergence cap.
double capped_slope(const DistortionGauge& g, const WeightFunction& w, double alpha, double x) {
    const double target = alpha / w(x);
    const double sup = gauge_response_sup(g);
    if (target >= sup * (1.0 - 1e-13)) return kSlopeCap;
    try {
        return slope_root(g, target);
    } catch (const SlopeSaturated&) {
        return kSlopeCap;
    }
}

}  // namespace

double solve_pointwise_slope(const DistortionGauge& gauge, const WeightFunction& weight,
                             double alpha, double x) {
    return slope_root(gauge, alpha / weight(x));
}

GrotzschSolution profile_from_alpha(const GrotzschProblem& problem, double alpha,
                                    int n_samples) {
    const auto& g = problem.gauge;
    const auto& w = problem.weight;
    const double ell = problem.ell;

    auto slope = [&](double x) { return slope_root(g, alpha / w(x)); };

    GrotzschSolution sol;
    sol.alpha = alpha;
    sol.ell = ell;
    sol.L_target = problem.L;
    sol.samples.resize(n_samples);
    double u = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        const double x = ell * k / (n_samples - 1);
        if (k > 0) {
            const double x_prev = ell * (k - 1) / (n_samples - 1);
            u += integrate(slope, x_prev, x, 1e-14, 1e-12);
        }
        const double ux = slope(x);
        sol.samples[k] = {x, u, ux};
        const double res = std::abs(w(x) * (1.0 - 1.0 / (ux * ux)) * g.dphi(ux + 1.0 / ux) - alpha);
        sol.max_ode_residual = std::max(sol.max_ode_residual, res / std::max(1.0, std::abs(alpha)));
    }
    sol.L_achieved = u;
    return sol;
}

namespace {

double boundary_length(const GrotzschProblem& p, double alpha) {
    auto slope = [&](double x) { return slope_root(p.gauge, alpha / p.weight(x)); };
    return integrate(slope, 0.0, p.ell, 1e-13, 1e-11);
}

}  // namespace

double critical_length(const GrotzschProblem& problem) {
    const auto& g = problem.gauge;
    if (!g.derivative_bounded()) return std::numeric_limits<double>::infinity();
    const auto& w = problem.weight;
    const double alpha_max = w.min_value() * g.dphi_limit();
    const double x0 = w.argmin();
    const double ell = problem.ell;

    auto f = [&](double x) { return capped_slope(g, w, alpha_max, x); };

    double total = 0.0;
    const double cap = 1e6 * std::max(1.0, ell);
    auto piece = [&](double a, double b, double sing) -> bool {
        // returns false on divergence
        if (b - a <= 0.0) return true;
        const ImproperResult r = integrate_to_singularity(f, a, b, sing, 1e-10, cap);
        if (r.verdict == TailVerdict::Divergent) return false;
        if (r.verdict == TailVerdict::Inconclusive)
            throw InconclusiveConvergence("critical_length: refinement budget exhausted near x0");
        total += r.value;
        return true;
    };
    if (x0 > 0.0 && !piece(0.0, x0, x0)) return std::numeric_limits<double>::infinity();
    if (x0 < ell && !piece(x0, ell, x0)) return std::numeric_limits<double>::infinity();
    return total;
}

PhenomenonRecord classify_phenomenon(const DistortionGauge& gauge,
                                     const WeightFunction& weight, double ell) {
    PhenomenonRecord rec;
    GrotzschProblem p{ell, ell, gauge, weight};
    if (!gauge.derivative_bounded()) {
        rec.phenomenon = false;
        return rec;
    }
    const double alpha_max = weight.min_value() * gauge.dphi_limit();
    const double x0 = weight.argmin();
    for (int k = 4; k <= 24; ++k) {
        const double d = ell * std::pow(2.0, -k);
        for (double x : {x0 - d, x0 + d}) {
            if (x <= 0.0 || x >= ell) continue;
            rec.diagnostic.emplace_back(x, capped_slope(gauge, weight, alpha_max, x));
        }
    }
    rec.L0 = critical_length(p);
    rec.phenomenon = std::isfinite(rec.L0);
    return rec;
}

GrotzschSolution solve_boundary(const GrotzschProblem& problem, int n_samples) {
    const double ell = problem.ell;
    const double L = problem.L;

    if (std::abs(L - ell) <= 1e-12 * std::max(L, ell)) {
        GrotzschSolution sol = profile_from_alpha(problem, 0.0, n_samples);
        sol.verdict = Verdict::IdentityCase;
        return sol;
    }

    const bool bounded = problem.gauge.derivative_bounded();
    const double alpha_max =
        bounded ? problem.weight.min_value() * problem.gauge.dphi_limit()
                : std::numeric_limits<double>::infinity();

    double lo, hi;
    double L0 = std::numeric_limits<double>::infinity();
    if (L > ell) {
        if (bounded) {
            L0 = critical_length(problem);
            if (std::isfinite(L0) && L > L0 * (1.0 + 1e-12)) {
                // No minimizer: report the critical profile and the bound.
                GrotzschSolution sol;
                sol.alpha = alpha_max;
                sol.ell = ell;
                sol.L_target = L;
                sol.L_achieved = L0;
                sol.L0 = L0;
                sol.verdict = Verdict::NitschePhenomenon;
                return sol;
            }
        }
        lo = 0.0;
        if (bounded) {
            hi = alpha_max;
            for (int k = 1; k <= 45; ++k) {
                hi = alpha_max * (1.0 - std::pow(2.0, -k));
                if (boundary_length(problem, hi) >= L) break;
            }
        } else {
            hi = std::max(1.0, problem.weight.min_value());
            while (boundary_length(problem, hi) < L) hi *= 2.0;
        }
        if (boundary_length(problem, hi) < L) {
            // L within roundoff of L0: accept the near-critical profile.
            GrotzschSolution sol = profile_from_alpha(problem, hi, n_samples);
            sol.verdict = Verdict::MinimizerExists;
            sol.L0 = L0;
            return sol;
        }
    } else {
        hi = 0.0;
        lo = -1.0;
        int guard = 0;
        while (boundary_length(problem, lo) > L) {
            lo *= 2.0;
            if (++guard > 200)
                throw DivergentProfile("solve_boundary: L(alpha) does not reach the target as alpha -> -inf");
        }
    }

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double Lm = boundary_length(problem, mid);
        if (std::abs(Lm - L) <= 1e-10 * L) {
            lo = hi = mid;
            break;
        }
        if (Lm < L)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) break;
    }
    const double alpha = 0.5 * (lo + hi);
    GrotzschSolution sol = profile_from_alpha(problem, alpha, n_samples);
    sol.verdict = Verdict::MinimizerExists;
    sol.L0 = L0;
    return sol;
}

DegenerateFamily::DegenerateFamily(const GrotzschProblem& problem) : problem_(problem) {
    const auto& g = problem.gauge;
    const auto& w = problem.weight;
    if (!g.derivative_bounded())
        throw std::invalid_argument("DegenerateFamily: gauge derivative must be bounded");
    const double ell = problem.ell;
    const double alpha_max = w.min_value() * g.dphi_limit();
    const double x0 = w.argmin();

    // x grid: uniform plus geometric refinement toward the weight minimum.
    std::vector<double> xs;
    const int n_uniform = 513;
    for (int k = 0; k < n_uniform; ++k) xs.push_back(ell * k / (n_uniform - 1));
    // Depth 24 keeps every sample in the range where the slope solve is
    // well-conditioned; the improper-integral tail extrapolation accounts for
    // the mass below the deepest sample.
    for (int k = 1; k <= 24; ++k) {
        const double d = ell * std::pow(2.0, -k);
        if (x0 - d > 0.0) xs.push_back(x0 - d);
        if (x0 + d < ell) xs.push_back(x0 + d);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    xs.erase(std::remove_if(xs.begin(), xs.end(),
                            [&](double x) { return std::abs(x - x0) < 1e-15 * std::max(1.0, ell); }),
             xs.end());

    auto f = [&](double x) { return capped_slope(g, w, alpha_max, x); };
    const double cap = 1e6 * std::max(1.0, ell);

    critical_.reserve(xs.size());
    double u = 0.0;
    double prev_x = 0.0;
    bool first = true;
    for (double x : xs) {
        if (first) {
            if (x > 0.0) {
                // the first interval may carry the singularity at x0 = 0
                if (x0 <= 0.0) {
                    const auto r = integrate_to_singularity(f, 0.0, x, 0.0, 1e-10, cap);
                    if (r.verdict != TailVerdict::Convergent)
                        throw DivergentProfile("DegenerateFamily: critical slope not integrable");
                    u = r.value;
                } else {
                    u = integrate(f, 0.0, x, 1e-13, 1e-11);
                }
            }
            first = false;
        } else if (prev_x < x0 && x > x0) {
            // straddling interval: integrate into the singularity from both sides
            const auto rl = integrate_to_singularity(f, prev_x, x0, x0, 1e-10, cap);
            const auto rr = integrate_to_singularity(f, x0, x, x0, 1e-10, cap);
            if (rl.verdict != TailVerdict::Convergent || rr.verdict != TailVerdict::Convergent)
                throw DivergentProfile("DegenerateFamily: critical slope not integrable");
            u += rl.value + rr.value;
        } else {
            u += integrate(f, prev_x, x, 1e-13, 1e-11);
        }
        critical_.push_back({x, u, f(x)});
        prev_x = x;
    }
    L0_ = critical_.back().u;
    if (!(problem.L > L0_))
        throw std::invalid_argument("DegenerateFamily: requires L > L0 (no-minimizer range)");
    if (x0 <= 0.0)
        a0_ = 0.0;
    else if (x0 >= ell)
        a0_ = L0_;
    else {
        // u0(x0) by interpolation between the tightest bracketing samples
        auto it = std::lower_bound(critical_.begin(), critical_.end(), x0,
                                   [](const ProfileSample& s, double x) { return s.x < x; });
        a0_ = (it == critical_.begin()) ? 0.0 : (it == critical_.end() ? L0_ : 0.5 * (it->u + (it - 1)->u));
    }
    if (a0_ < 0.0 || a0_ + (problem.L - L0_) > problem.L + 1e-12)
        throw PlateauPlacementError("DegenerateFamily: plateau does not fit in [0, L]");

    // Unattainable bound: integral of phi(u_x + 1/u_x) lambda, singular at x0.
    auto e = [&](double x) {
        const double s = f(x);
        return g.phi(s + 1.0 / s) * w(x);
    };
    bound_ = 0.0;
    if (x0 > 0.0) {
        const auto r = integrate_to_singularity(e, 0.0, x0, x0, 1e-10, cap);
        if (r.verdict != TailVerdict::Convergent)
            throw DivergentProfile("DegenerateFamily: critical energy not integrable");
        bound_ += r.value;
    }
    if (x0 < ell) {
        const auto r = integrate_to_singularity(e, x0, ell, x0, 1e-10, cap);
        if (r.verdict != TailVerdict::Convergent)
            throw DivergentProfile("DegenerateFamily: critical energy not integrable");
        bound_ += r.value;
    }
    // Collapsed strip of width L - L0 at the weight minimum: as the slope
    // omega -> 0 there, omega * phi(omega + 1/omega) -> phi'(inf), leaving a
    // residual energy proportional to the excess length.
    bound_ += w(x0) * g.dphi_limit() * (problem.L - L0_);
}

std::vector<DegenerateFamily::VSample> DegenerateFamily::build_vj(int j, double* scale) const {
    const double L = problem_.L;
    const double delta = L - L0_;
    const double x0 = problem_.weight.argmin();

    // v0 = u0^{-1} by interpolation on the critical samples; its slope comes
    // from the exact pointwise slope, not finite differences.
    auto v0 = [&](double b) {
        if (b <= 0.0) return 0.0;
        if (b >= L0_) return problem_.ell;
        auto it = std::lower_bound(critical_.begin(), critical_.end(), b,
                                   [](const ProfileSample& s, double u) { return s.u < u; });
        if (it == critical_.begin()) return it->x * b / std::max(it->u, 1e-300);
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double t = (b - lo.u) / std::max(hi.u - lo.u, 1e-300);
        return lo.x + t * (hi.x - lo.x);
    };
    auto omega = [&](double x) {  // 1/u0_x, zero at the singular point
        const double s = capped_slope(problem_.gauge, problem_.weight,
                                      problem_.weight.min_value() * problem_.gauge.dphi_limit(), x);
        return 1.0 / s;
    };

    const int n = 16385;
    std::vector<VSample> out(n);
    const double floor_slope = 1.0 / j;
    for (int k = 0; k < n; ++k) {
        const double a = L * k / (n - 1);
        double x, va;
        if (a <= a0_) {
            x = v0(a);
            va = omega(x);
        } else if (a <= a0_ + delta) {
            x = (x0 > 0.0 && x0 < problem_.ell) ? x0 : v0(a0_);
            va = 0.0;
        } else {
            x = v0(a - delta);
            va = omega(x);
        }
        out[k] = {a, x, std::max(va, floor_slope)};
    }
    // L1-rescale the floored slope so the image is exactly [0, ell].
    double mass = 0.0;
    const double da = L / (n - 1);
    for (int k = 1; k < n; ++k) mass += 0.5 * (out[k - 1].v_a + out[k].v_a) * da;
    const double c = problem_.ell / mass;
    double cum = 0.0;
    for (int k = 0; k < n; ++k) {
        if (k > 0) cum += 0.5 * (out[k - 1].v_a + out[k].v_a) * da;
        out[k].v = cum * c;
    }
    for (auto& s : out) s.v_a *= c;
    out.back().v = problem_.ell;  // pin the endpoint against rounding drift
    if (scale) *scale = c;
    return out;
}

RectGridMap DegenerateFamily::map(int j, int n_x, int n_y) const {
    const auto vj = build_vj(j, nullptr);
    const double ell = problem_.ell;
    RectGridMap m(Rectangle(ell), Rectangle(problem_.L), n_x, n_y);
    for (int i = 0; i < n_x; ++i) {
        const double x = ell * i / (n_x - 1);
        // invert the monotone sampled v^j
        double a;
        if (i == 0)
            a = 0.0;
        else if (i == n_x - 1)
            a = problem_.L;
        else {
            auto it = std::lower_bound(vj.begin(), vj.end(), x,
                                       [](const VSample& s, double xv) { return s.v < xv; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double t = (x - lo.v) / std::max(hi.v - lo.v, 1e-300);
            a = lo.a + t * (hi.a - lo.a);
        }
        for (int jy = 0; jy < n_y; ++jy)
            m.at(i, jy) = cplx(a, m.y(jy));
    }
    return m;
}

double DegenerateFamily::energy(int j) const {
    const auto vj = build_vj(j, nullptr);
    const auto& g = problem_.gauge;
    const auto& w = problem_.weight;
    double total = 0.0;
    for (size_t k = 1; k < vj.size(); ++k) {
        auto term = [&](const VSample& s) {
            const double om = s.v_a;
            return g.phi(om + 1.0 / om) * w(s.v) * om;
        };
        total += 0.5 * (term(vj[k - 1]) + term(vj[k])) * (vj[k].a - vj[k - 1].a);
    }
    return total;
}

SublinearDemo sublinear_infimum(const DistortionGauge& psi, const WeightFunction& weight,
                                double ell, double L, const std::vector<int>& js) {
    SublinearDemo demo;
    auto lam = [&](double x) { return weight(x); };
    const double total_weight = integrate(lam, 0.0, ell, 1e-12, 1e-10);
    demo.infimum = psi.phi(1.0) * total_weight;
    demo.js = js;
    for (int j : js) {
        const double wcol = ell / j;
        // collar slope absorbs all the excess stretch; slope 1 elsewhere
        const double s1 = (L - (ell - wcol)) / wcol;
        const double K1 = 0.5 * (s1 + 1.0 / s1);
        const double collar_weight = integrate(lam, 0.0, wcol, 1e-12, 1e-10);
        demo.energies.push_back(psi.phi(K1) * collar_weight +
                                psi.phi(1.0) * (total_weight - collar_weight));
    }
    return demo;
}

GapReport minimality_gap_bound(const RectGridMap& candidate, const GrotzschSolution& sol,
                               const GrotzschProblem& problem) {
    if (sol.verdict == Verdict::NitschePhenomenon)
        throw std::invalid_argument("minimality_gap_bound: solution must be a minimizer");

    const auto& g = problem.gauge;
    const auto& w = problem.weight;
    auto phi = [&](double t) { return g.phi(t); };
    auto lam = [&](double x) { return w(x); };

    // Resample the minimizer's shear profile on the candidate's x grid.
    const int n_x = candidate.n_x, n_y = candidate.n_y;
    std::vector<double> u(n_x), ux(n_x);
    auto slope = [&](double x) { return slope_root(g, sol.alpha / w(x)); };
    double cum = 0.0;
    for (int i = 0; i < n_x; ++i) {
        const double x = problem.ell * i / (n_x - 1);
        if (i > 0) {
            const double xp = problem.ell * (i - 1) / (n_x - 1);
            cum += integrate(slope, xp, x, 1e-14, 1e-12);
        }
        u[i] = cum;
        ux[i] = slope(x);
    }
    RectGridMap f0 = sample_shear(u, problem.ell, cum, n_y);

    GapReport rep;
    rep.candidate_energy = phi_distortion_energy(candidate, phi, lam,
                                                 DistortionConvention::TraceOverJac);
    rep.minimizer_energy = phi_distortion_energy(f0, phi, lam,
                                                 DistortionConvention::TraceOverJac);
    rep.gap = rep.candidate_energy - rep.minimizer_energy;

    double err = 0.0;
    try {
        const double cand_c = phi_distortion_energy(coarsen(candidate), phi, lam,
                                                    DistortionConvention::TraceOverJac);
        const double min_c = phi_distortion_energy(coarsen(f0), phi, lam,
                                                   DistortionConvention::TraceOverJac);
        err = (std::abs(rep.candidate_energy - cand_c) + std::abs(rep.minimizer_energy - min_c)) / 3.0;
    } catch (const GridTooSmall&) {
        err = 1e-6 * std::abs(rep.candidate_energy);
    }
    rep.budget = 4.0 * err + 1e-9 * std::abs(rep.candidate_energy);

    // Zero-mean identities from the edge-to-edge boundary conditions.
    const double dx = problem.ell / (n_x - 1);
    const double dy = 1.0 / (n_y - 1);
    double id1 = 0.0, id2 = 0.0;
    for (int i = 0; i < n_x; ++i) {
        const double wx = (i == 0 || i == n_x - 1) ? 0.5 * dx : dx;
        const double om = 1.0 / ux[i];
        const double coeff = lam(candidate.x(i)) * (om - 1.0 / om) * g.dphi(ux[i] + om);
        for (int jy = 0; jy < n_y; ++jy) {
            const double wy = (jy == 0 || jy == n_y - 1) ? 0.5 * dy : dy;
            const auto d = rect_derivatives(candidate, i, jy);
            id1 += wx * wy * coeff * (std::imag(d.f_y) - 1.0);
            id2 += wx * wy * (std::real(d.f_x) - ux[i]);
        }
    }
    rep.shear_identity_residual = std::abs(id1);
    rep.x_mean_identity_residual = std::abs(id2);

    const double id_tol = rep.budget + 1e-5 * (1.0 + std::abs(rep.candidate_energy));
    rep.pass = rep.gap >= -rep.budget &&
               rep.shear_identity_residual <= id_tol &&
               rep.x_mean_identity_residual <= id_tol;
    return rep;
}

}  // namespace extann
