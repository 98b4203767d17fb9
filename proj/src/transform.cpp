#include "extann/transform.hpp"

#include <cmath>
#include <string>

#include "extann/errors.hpp"

namespace extann {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

ProblemDictionary annulus_problem_to_rect(const Annulus& a1, const Annulus& a2,
                                          const std::function<double(double)>& eta) {
    const Annulus n1 = a1.normalized();
    const Annulus n2 = a2.normalized();
    const double ell = n1.modulus() / kTwoPi;
    const double L = n2.modulus() / kTwoPi;
    auto lam = [eta](double x) {
        return eta(std::exp(kTwoPi * x)) * std::exp(2.0 * kTwoPi * x) / (4.0 * M_PI * M_PI);
    };
    return {n1, n2, ell, L, WeightFunction::custom(lam, ell, "lifted")};
}

AnnulusProblem rect_problem_to_annulus(double ell, double L, const WeightFunction& lambda) {
    AnnulusProblem p{Annulus(1.0, std::exp(kTwoPi * ell)), Annulus(1.0, std::exp(kTwoPi * L)),
                     nullptr};
    p.eta = [lambda](double w) {
        const double x = std::log(w) / kTwoPi;
        return 4.0 * M_PI * M_PI * lambda(x) * std::exp(-2.0 * kTwoPi * x);
    };
    return p;
}

RectGridMap lift_map(const PolarGridMap& m) {
    const double ell = m.dom.modulus() / kTwoPi;
    const double L = m.bc.modulus() / kTwoPi;
    const double rstar = m.bc.r_inner();
    const int n_x = m.n_t;
    const int n_y = m.n_theta + 1;
    RectGridMap out(Rectangle(ell), Rectangle(L), n_x, n_y);

    // continuous argument: unwrap along the first row in i, then along j
    std::vector<double> arg0(n_x);
    for (int i = 0; i < n_x; ++i) {
        double a = std::arg(m.at(i, 0));
        if (i > 0) {
            while (a - arg0[i - 1] > M_PI) a -= kTwoPi;
            while (a - arg0[i - 1] < -M_PI) a += kTwoPi;
        }
        arg0[i] = a;
    }
    for (int i = 0; i < n_x; ++i) {
        double prev = arg0[i];
        for (int j = 0; j < m.n_theta; ++j) {
            double a = std::arg(m.at(i, j));
            while (a - prev > M_PI) a -= kTwoPi;
            while (a - prev < -M_PI) a += kTwoPi;
            prev = a;
            const double u = std::log(std::abs(m.at(i, j)) / rstar) / kTwoPi;
            out.at(i, j) = cplx(u, a / kTwoPi);
        }
        out.at(i, n_y - 1) = out.at(i, 0) + cplx(0.0, 1.0);
    }
    return out;
}

PolarGridMap project_map(const RectGridMap& m) {
    const double ell = m.q1.length();
    const double L = m.q2.length();
    for (int i = 0; i < m.n_x; ++i) {
        const cplx d = m.at(i, m.n_y - 1) - m.at(i, 0) - cplx(0.0, 1.0);
        if (std::abs(d) > 1e-9)
            throw SeamMismatch("project_map: seam periodicity violated at x index " +
                               std::to_string(i) + " by " + std::to_string(std::abs(d)));
    }
    PolarGridMap out(Annulus(1.0, std::exp(kTwoPi * ell)), Annulus(1.0, std::exp(kTwoPi * L)),
                     m.n_x, m.n_y - 1);
    for (int i = 0; i < m.n_x; ++i)
        for (int j = 0; j + 1 < m.n_y; ++j)
            out.at(i, j) = std::exp(kTwoPi * m.at(i, j));
    return out;
}

}  // namespace extann
