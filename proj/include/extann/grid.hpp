#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "extann/annulus.hpp"
#include "extann/radial.hpp"

namespace extann {

using cplx = std::complex<double>;

/// Complex samples h(t_i, theta_j) on a tensor grid over an annulus.
/// t is uniform in log t with both endpoints included; theta is periodic
/// with n_theta distinct columns (column n_theta wraps to column 0).
struct PolarGridMap {
    Annulus dom;
    Annulus bc;  // target annulus, order-preserving boundary correspondence
    int n_t = 0;
    int n_theta = 0;
    std::vector<cplx> values;  // row-major, [i * n_theta + j]

    PolarGridMap(Annulus dom_, Annulus bc_, int n_t_, int n_theta_);

    double log_step() const { return dom.modulus() / (n_t - 1); }
    double t(int i) const { return dom.r_inner() * std::exp(log_step() * i); }
    double theta(int j) const { return 2.0 * M_PI * j / n_theta; }

    cplx at(int i, int j) const {
        const int jw = ((j % n_theta) + n_theta) % n_theta;
        return values[static_cast<size_t>(i) * n_theta + jw];
    }
    cplx& at(int i, int j) {
        const int jw = ((j % n_theta) + n_theta) % n_theta;
        return values[static_cast<size_t>(i) * n_theta + jw];
    }
};

/// Complex samples f(x_i, y_j) on [0,ell] x [0,1]; both endpoints included
/// in each direction.
struct RectGridMap {
    Rectangle q1;  // source, length ell
    Rectangle q2;  // target, length L
    int n_x = 0;
    int n_y = 0;
    std::vector<cplx> values;

    RectGridMap(Rectangle q1_, Rectangle q2_, int n_x_, int n_y_);

    double x(int i) const { return q1.length() * i / (n_x - 1); }
    double y(int j) const { return static_cast<double>(j) / (n_y - 1); }

    cplx at(int i, int j) const { return values[static_cast<size_t>(i) * n_y + j]; }
    cplx& at(int i, int j) { return values[static_cast<size_t>(i) * n_y + j]; }
};

/// h(t, theta) = H(t) e^{i theta} sampled on the profile's domain annulus.
PolarGridMap sample_radial(const RadialProfile& p, const Annulus& tgt,
                           int n_t, int n_theta);

/// Shear map f(x, y) = u(x) + iy from slope samples on a uniform x grid.
RectGridMap sample_shear(const std::vector<double>& u, double ell, double L, int n_y);

struct PolarDerivatives {
    cplx h_N;  // radial derivative, d h / dt
    cplx h_T;  // angular derivative, (1/t) d h / d theta
};
/// Central stencils in the interior, one-sided at the t boundaries; the
/// periodic theta direction uses a fourth-order stencil (second order when
/// n_theta < 5). Throws GridTooSmall below 3x3.
PolarDerivatives polar_derivatives(const PolarGridMap& m, int i, int j);

struct RectDerivatives {
    cplx f_x;
    cplx f_y;
};
RectDerivatives rect_derivatives(const RectGridMap& m, int i, int j);

double jacobian_at(const PolarGridMap& m, int i, int j);
double jacobian_at(const RectGridMap& m, int i, int j);

/// Distortion (|d1|^2 + |d2|^2) / (2 J) = (K + 1/K)/2 with K the singular
/// value ratio of the discrete derivative. Throws DegenerateCell if J <= 0.
double distortion_at(const PolarGridMap& m, int i, int j);
double distortion_at(const RectGridMap& m, int i, int j);

struct AdmissibilityReport {
    bool boundary_ok = false;
    bool jacobian_positive = false;  // at all interior nodes
    double max_boundary_dev = 0.0;
    int degenerate_i = -1, degenerate_j = -1;
    bool admissible() const { return boundary_ok && jacobian_positive; }
};
AdmissibilityReport check_admissible(const PolarGridMap& m);
AdmissibilityReport check_admissible(const RectGridMap& m);

/// Dirichlet energy by tensor-product quadrature: composite Simpson in the
/// non-periodic directions, trapezoid (spectral) in the periodic one.
double dirichlet_energy(const PolarGridMap& m);
double dirichlet_energy(const RectGridMap& m);

enum class DistortionConvention {
    Symmetrized,  // (K + 1/K)/2, equals 1 on conformal maps
    TraceOverJac, // K + 1/K, the argument of the gauge in the profile ODE
};

/// Quadrature of phi(distortion) * weight over the domain. Degenerate cells
/// throw DegenerateCell unless skip_degenerate is set (monotone-limit maps),
/// in which case they are excluded from the integral.
double phi_distortion_energy(const PolarGridMap& m,
                             const std::function<double(double)>& phi,
                             const std::function<double(const cplx&)>& weight,
                             DistortionConvention conv = DistortionConvention::Symmetrized,
                             bool skip_degenerate = false);
double phi_distortion_energy(const RectGridMap& m,
                             const std::function<double(double)>& phi,
                             const std::function<double(double)>& weight_x,
                             DistortionConvention conv = DistortionConvention::Symmetrized,
                             bool skip_degenerate = false);

enum class FreeLagrangianKind { F1, F2, F3, F4 };

struct FreeLagrangianSpec {
    FreeLagrangianKind which;
    // F1: density M(t) of radius; F2: N(s), s = |h|; F3: A(s); F4: B(t).
    std::function<double(double)> density;
};

struct FreeLagrangianResult {
    double value;      // grid quadrature over the annulus
    double predicted;  // homotopy-class invariant from the 1D closed form
};
FreeLagrangianResult free_lagrangian(const PolarGridMap& m, const FreeLagrangianSpec& spec);

/// Boundary-respecting seeded smooth perturbation. Deterministic per seed;
/// the amplitude is halved up to 8 times if Jacobian positivity fails, then
/// RejectedPerturbation is thrown.
PolarGridMap perturb_map(const PolarGridMap& m, double amplitude, uint64_t seed);
RectGridMap perturb_map(const RectGridMap& m, double amplitude, uint64_t seed);

struct EnergyFunctional {
    enum class Kind { Dirichlet, PhiDistortion } kind = Kind::Dirichlet;
    std::function<double(double)> phi;              // PhiDistortion only
    std::function<double(const cplx&)> weight;      // PhiDistortion only
    DistortionConvention conv = DistortionConvention::Symmetrized;
    std::string name() const { return kind == Kind::Dirichlet ? "dirichlet" : "phi-distortion"; }
};

struct CertificateReport {
    double candidate_energy = 0.0;
    double budget = 0.0;        // Richardson-estimated discretization error
    double min_gap = 0.0;       // min over trials of perturbed - candidate
    double median_gap = 0.0;
    int trials_run = 0;
    int trials_rejected = 0;
    bool pass = false;
    uint64_t worst_seed = 0;
};

/// Evaluates `trials` seeded perturbations of the candidate and reports the
/// energy gaps. Fails if any admissible perturbation undercuts the candidate
/// by more than the discretization budget.
CertificateReport minimality_certificate(const PolarGridMap& candidate,
                                         const EnergyFunctional& functional,
                                         int trials, uint64_t seed,
                                         double amplitude = 0.02);

/// Grid map file format: `# polar|rect, n1, n2, params...` then rows
/// `i, j, re, im`, 17 significant digits.
void write_grid_csv(std::ostream& os, const PolarGridMap& m);
void write_grid_csv(std::ostream& os, const RectGridMap& m);
struct LoadedGridMap {
    std::optional<PolarGridMap> polar;
    std::optional<RectGridMap> rect;
};
LoadedGridMap read_grid_csv(std::istream& is);

/// Every other node in each direction; requires n_t odd and n_theta even
/// (polar) or both point counts odd (rect).
PolarGridMap coarsen(const PolarGridMap& m);
RectGridMap coarsen(const RectGridMap& m);

}  // namespace extann
