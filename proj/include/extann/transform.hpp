#pragma once

#include <functional>

#include "extann/annulus.hpp"
#include "extann/gauge.hpp"
#include "extann/grid.hpp"

namespace extann {

/// The exp/log dictionary between an annulus pair with weight eta(w) and a
/// rectangle pair with weight lambda(x): ell = Mod(A1)/2pi, L = Mod(A2)/2pi,
/// eta(w) = 4 pi^2 lambda(z) e^{-4 pi Re z} with w = e^{2 pi z}. All 4 pi^2
/// factors are kept explicit.
struct ProblemDictionary {
    Annulus a1;
    Annulus a2;
    double ell;
    double L;
    WeightFunction lambda;  // on [0, ell]
};

ProblemDictionary annulus_problem_to_rect(const Annulus& a1, const Annulus& a2,
                                          const std::function<double(double)>& eta);

struct AnnulusProblem {
    Annulus a1;
    Annulus a2;
    std::function<double(double)> eta;  // weight on |w|, radially symmetric
};

AnnulusProblem rect_problem_to_annulus(double ell, double L, const WeightFunction& lambda);

/// f~(z) = (1/2pi) log(f(e^{2pi z})) on matched grids: polar row i maps to
/// x = ln(t_i / r)/2pi, column j to y = j/n_theta, plus a duplicated seam row
/// at y = 1 shifted by +i. The argument is unwrapped continuously from the
/// (0,0) node.
RectGridMap lift_map(const PolarGridMap& m);

/// Inverse of lift_map. Requires the seam periodicity f(x,1) = f(x,0) + i
/// to 1e-9; throws SeamMismatch otherwise.
PolarGridMap project_map(const RectGridMap& m);

}  // namespace extann
