// Python bindings for the extann core: radial minimizers, grid maps and
// certificates, the weighted Grotzsch problem, and the exp/log dictionary.
#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "extann/annulus.hpp"
#include "extann/errors.hpp"
#include "extann/gauge.hpp"
#include "extann/grid.hpp"
#include "extann/grotzsch.hpp"
#include "extann/radial.hpp"
#include "extann/transform.hpp"

namespace py = pybind11;
using namespace extann;

namespace {

FreeLagrangianKind parse_kind(const std::string& s) {
    if (s == "F1") return FreeLagrangianKind::F1;
    if (s == "F2") return FreeLagrangianKind::F2;
    if (s == "F3") return FreeLagrangianKind::F3;
    if (s == "F4") return FreeLagrangianKind::F4;
    throw std::invalid_argument("free Lagrangian kind must be F1, F2, F3 or F4");
}

DistortionConvention parse_convention(const std::string& s) {
    if (s == "symmetrized") return DistortionConvention::Symmetrized;
    if (s == "trace-over-jac") return DistortionConvention::TraceOverJac;
    throw std::invalid_argument("convention must be 'symmetrized' or 'trace-over-jac'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "energy-minimal deformations between annuli and rectangles";

    py::register_exception<RegimeError>(m, "RegimeError", PyExc_ValueError);
    py::register_exception<NotInvertibleError>(m, "NotInvertibleError", PyExc_ValueError);
    py::register_exception<DegenerateCell>(m, "DegenerateCellError", PyExc_ArithmeticError);
    py::register_exception<RejectedPerturbation>(m, "RejectedPerturbationError",
                                                 PyExc_RuntimeError);
    py::register_exception<InconclusiveConvergence>(m, "InconclusiveConvergenceError",
                                                    PyExc_RuntimeError);

    py::class_<Annulus>(m, "Annulus")
        .def(py::init<double, double>(), py::arg("r_inner"), py::arg("r_outer"))
        .def_property_readonly("r_inner", &Annulus::r_inner)
        .def_property_readonly("r_outer", &Annulus::r_outer)
        .def_property_readonly("ratio", &Annulus::ratio)
        .def_property_readonly("modulus", &Annulus::modulus)
        .def_property_readonly("area", &Annulus::area)
        .def("normalized", &Annulus::normalized)
        .def("__repr__", [](const Annulus& a) {
            return "Annulus(" + std::to_string(a.r_inner()) + ", " +
                   std::to_string(a.r_outer()) + ")";
        });

    py::class_<Rectangle>(m, "Rectangle")
        .def(py::init<double>(), py::arg("length"))
        .def_property_readonly("length", &Rectangle::length);

    m.def("nitsche_bound_holds", &nitsche_bound_holds, py::arg("dom"), py::arg("tgt"));
    m.def(
        "classify_regime",
        [](const Annulus& dom, const Annulus& tgt) {
            return std::string(to_string(classify_regime(dom, tgt)));
        },
        py::arg("dom"), py::arg("tgt"));

    py::class_<RadialProfile>(m, "RadialProfile")
        .def("value", &RadialProfile::value, py::arg("t"))
        .def("derivative", &RadialProfile::derivative, py::arg("t"))
        .def_property_readonly("kind",
                               [](const RadialProfile& p) {
                                   switch (p.kind()) {
                                       case ProfileKind::Harmonic: return "harmonic";
                                       case ProfileKind::BeyondNitsche: return "beyond-nitsche";
                                       case ProfileKind::PowerStretch: return "power-stretch";
                                   }
                                   return "?";
                               })
        .def_property_readonly("t_min", &RadialProfile::t_min)
        .def_property_readonly("t_max", &RadialProfile::t_max)
        .def_property_readonly("coef_a", &RadialProfile::coef_a)
        .def_property_readonly("coef_b", &RadialProfile::coef_b)
        .def_property_readonly("rho", &RadialProfile::rho)
        .def_property_readonly("plateau_value", &RadialProfile::plateau_value)
        .def_property_readonly("strictly_increasing", &RadialProfile::strictly_increasing);

    m.def("harmonic_radial", &harmonic_radial, py::arg("dom"), py::arg("tgt"));
    m.def("beyond_nitsche_profile", &beyond_nitsche_profile, py::arg("dom"), py::arg("tgt"));
    m.def(
        "characteristic_constant",
        [](const RadialProfile& p) {
            const auto c = characteristic_constant(p);
            return py::make_tuple(c.c, c.max_deviation);
        },
        py::arg("profile"), "Returns (c, max_deviation) of the invariant H^2 - t^2 H'^2.");
    m.def("elasticity", &elasticity, py::arg("profile"), py::arg("t"));
    m.def(
        "radial_dirichlet_energy",
        [](const RadialProfile& p) {
            const auto e = radial_dirichlet_energy(p);
            return py::make_tuple(e.closed_form, e.quadrature);
        },
        py::arg("profile"), "Returns (closed_form, quadrature).");
    m.def(
        "power_stretch_extremal",
        [](const Annulus& dom, const Annulus& tgt) {
            const auto r = power_stretch_extremal(dom, tgt);
            return py::make_tuple(r.profile, r.k_linear, r.k_distortion);
        },
        py::arg("dom"), py::arg("tgt"), "Returns (profile, k_linear, k_distortion).");

    py::class_<InverseProfile>(m, "InverseProfile")
        .def("value", &InverseProfile::value, py::arg("tau"))
        .def("derivative", &InverseProfile::derivative, py::arg("tau"))
        .def_property_readonly("characteristic", &InverseProfile::characteristic)
        .def_property_readonly("tau_min", &InverseProfile::tau_min)
        .def_property_readonly("tau_max", &InverseProfile::tau_max);
    m.def("inverse_profile", &inverse_profile, py::arg("profile"));

    py::class_<PolarGridMap>(m, "PolarGridMap")
        .def_readonly("n_t", &PolarGridMap::n_t)
        .def_readonly("n_theta", &PolarGridMap::n_theta)
        .def_property_readonly("dom", [](const PolarGridMap& g) { return g.dom; })
        .def_property_readonly("bc", [](const PolarGridMap& g) { return g.bc; })
        .def("t", &PolarGridMap::t, py::arg("i"))
        .def("theta", &PolarGridMap::theta, py::arg("j"))
        .def("at", [](const PolarGridMap& g, int i, int j) { return g.at(i, j); },
             py::arg("i"), py::arg("j"))
        .def("set_at", [](PolarGridMap& g, int i, int j, cplx v) { g.at(i, j) = v; },
             py::arg("i"), py::arg("j"), py::arg("value"));

    py::class_<RectGridMap>(m, "RectGridMap")
        .def_readonly("n_x", &RectGridMap::n_x)
        .def_readonly("n_y", &RectGridMap::n_y)
        .def_property_readonly("ell", [](const RectGridMap& g) { return g.q1.length(); })
        .def_property_readonly("L", [](const RectGridMap& g) { return g.q2.length(); })
        .def("x", &RectGridMap::x, py::arg("i"))
        .def("y", &RectGridMap::y, py::arg("j"))
        .def("at", [](const RectGridMap& g, int i, int j) { return g.at(i, j); },
             py::arg("i"), py::arg("j"))
        .def("set_at", [](RectGridMap& g, int i, int j, cplx v) { g.at(i, j) = v; },
             py::arg("i"), py::arg("j"), py::arg("value"));

    m.def("sample_radial", &sample_radial, py::arg("profile"), py::arg("tgt"),
          py::arg("n_t"), py::arg("n_theta"));
    m.def("sample_shear", &sample_shear, py::arg("u"), py::arg("ell"), py::arg("L"),
          py::arg("n_y"));

    m.def("dirichlet_energy",
          py::overload_cast<const PolarGridMap&>(&dirichlet_energy), py::arg("map"));
    m.def("dirichlet_energy",
          py::overload_cast<const RectGridMap&>(&dirichlet_energy), py::arg("map"));
    m.def("distortion_at", py::overload_cast<const PolarGridMap&, int, int>(&distortion_at),
          py::arg("map"), py::arg("i"), py::arg("j"));
    m.def("distortion_at", py::overload_cast<const RectGridMap&, int, int>(&distortion_at),
          py::arg("map"), py::arg("i"), py::arg("j"));
    m.def("jacobian_at", py::overload_cast<const PolarGridMap&, int, int>(&jacobian_at),
          py::arg("map"), py::arg("i"), py::arg("j"));
    m.def("jacobian_at", py::overload_cast<const RectGridMap&, int, int>(&jacobian_at),
          py::arg("map"), py::arg("i"), py::arg("j"));
    m.def("coarsen", py::overload_cast<const PolarGridMap&>(&coarsen), py::arg("map"));
    m.def("coarsen", py::overload_cast<const RectGridMap&>(&coarsen), py::arg("map"));
    m.def("perturb_map",
          py::overload_cast<const PolarGridMap&, double, uint64_t>(&perturb_map),
          py::arg("map"), py::arg("amplitude"), py::arg("seed"));
    m.def("perturb_map",
          py::overload_cast<const RectGridMap&, double, uint64_t>(&perturb_map),
          py::arg("map"), py::arg("amplitude"), py::arg("seed"));

    auto admissibility = [](const AdmissibilityReport& r) {
        py::dict d;
        d["admissible"] = r.admissible();
        d["boundary_ok"] = r.boundary_ok;
        d["jacobian_positive"] = r.jacobian_positive;
        d["max_boundary_dev"] = r.max_boundary_dev;
        return d;
    };
    m.def("check_admissible",
          [admissibility](const PolarGridMap& g) { return admissibility(check_admissible(g)); },
          py::arg("map"));
    m.def("check_admissible",
          [admissibility](const RectGridMap& g) { return admissibility(check_admissible(g)); },
          py::arg("map"));

    m.def(
        "phi_distortion_energy",
        [](const PolarGridMap& g, const std::function<double(double)>& phi,
           const std::function<double(const cplx&)>& weight, const std::string& conv,
           bool skip_degenerate) {
            return phi_distortion_energy(g, phi, weight, parse_convention(conv),
                                         skip_degenerate);
        },
        py::arg("map"), py::arg("phi"), py::arg("weight"),
        py::arg("convention") = "symmetrized", py::arg("skip_degenerate") = false);
    m.def(
        "phi_distortion_energy",
        [](const RectGridMap& g, const std::function<double(double)>& phi,
           const std::function<double(double)>& weight_x, const std::string& conv,
           bool skip_degenerate) {
            return phi_distortion_energy(g, phi, weight_x, parse_convention(conv),
                                         skip_degenerate);
        },
        py::arg("map"), py::arg("phi"), py::arg("weight_x"),
        py::arg("convention") = "symmetrized", py::arg("skip_degenerate") = false);

    m.def(
        "free_lagrangian",
        [](const PolarGridMap& g, const std::string& kind,
           const std::function<double(double)>& density) {
            const auto r = free_lagrangian(g, {parse_kind(kind), density});
            return py::make_tuple(r.value, r.predicted);
        },
        py::arg("map"), py::arg("kind"), py::arg("density"),
        "Returns (grid_value, predicted_invariant).");

    m.def(
        "minimality_certificate",
        [](const PolarGridMap& candidate, int trials, uint64_t seed, double amplitude) {
            const auto rep = minimality_certificate(candidate, EnergyFunctional{}, trials,
                                                    seed, amplitude);
            py::dict d;
            d["pass"] = rep.pass;
            d["candidate_energy"] = rep.candidate_energy;
            d["budget"] = rep.budget;
            d["min_gap"] = rep.min_gap;
            d["median_gap"] = rep.median_gap;
            d["trials_run"] = rep.trials_run;
            d["trials_rejected"] = rep.trials_rejected;
            d["worst_seed"] = rep.worst_seed;
            return d;
        },
        py::arg("candidate"), py::arg("trials") = 100, py::arg("seed") = 7,
        py::arg("amplitude") = 0.02,
        "Dirichlet-energy minimality certificate over seeded perturbations.");

    m.def("lift_map", &lift_map, py::arg("map"));
    m.def("project_map", &project_map, py::arg("map"));

    py::class_<DistortionGauge>(m, "DistortionGauge")
        .def_static("identity", &DistortionGauge::identity)
        .def_static("power", &DistortionGauge::power, py::arg("p"))
        .def_static("linear_log", &DistortionGauge::linear_log)
        .def_static("shifted_power", &DistortionGauge::shifted_power, py::arg("p"))
        .def("phi", &DistortionGauge::phi, py::arg("t"))
        .def("dphi", &DistortionGauge::dphi, py::arg("t"))
        .def_property_readonly("derivative_bounded", &DistortionGauge::derivative_bounded)
        .def_property_readonly("dphi_limit", &DistortionGauge::dphi_limit)
        .def_property_readonly("name", &DistortionGauge::name);

    py::class_<WeightFunction>(m, "WeightFunction")
        .def_static("constant", &WeightFunction::constant, py::arg("c"), py::arg("ell"))
        .def_static("nitsche", &WeightFunction::nitsche, py::arg("ell"))
        .def_static("power_well", &WeightFunction::power_well, py::arg("s"), py::arg("ell"))
        .def("__call__", &WeightFunction::operator(), py::arg("x"))
        .def_property_readonly("ell", &WeightFunction::ell)
        .def_property_readonly("min_value", &WeightFunction::min_value)
        .def_property_readonly("argmin", &WeightFunction::argmin)
        .def_property_readonly("name", &WeightFunction::name);

    py::class_<GrotzschProblem>(m, "GrotzschProblem")
        .def(py::init([](double ell, double L, const DistortionGauge& gauge,
                         const WeightFunction& weight) {
                 return GrotzschProblem{ell, L, gauge, weight};
             }),
             py::arg("ell"), py::arg("L"), py::arg("gauge"), py::arg("weight"))
        .def_readonly("ell", &GrotzschProblem::ell)
        .def_readonly("L", &GrotzschProblem::L);

    py::class_<GrotzschSolution>(m, "GrotzschSolution")
        .def_readonly("alpha", &GrotzschSolution::alpha)
        .def_readonly("ell", &GrotzschSolution::ell)
        .def_readonly("L_target", &GrotzschSolution::L_target)
        .def_readonly("L_achieved", &GrotzschSolution::L_achieved)
        .def_readonly("L0", &GrotzschSolution::L0)
        .def_readonly("max_ode_residual", &GrotzschSolution::max_ode_residual)
        .def_property_readonly("verdict",
                               [](const GrotzschSolution& s) {
                                   return std::string(to_string(s.verdict));
                               })
        .def_property_readonly("samples", [](const GrotzschSolution& s) {
            py::list out;
            for (const auto& q : s.samples) out.append(py::make_tuple(q.x, q.u, q.u_x));
            return out;
        });

    m.def("solve_boundary", &solve_boundary, py::arg("problem"), py::arg("n_samples") = 1001);
    m.def("critical_length", &critical_length, py::arg("problem"));
    m.def(
        "classify_phenomenon",
        [](const DistortionGauge& gauge, const WeightFunction& weight, double ell) {
            const auto r = classify_phenomenon(gauge, weight, ell);
            return py::make_tuple(r.phenomenon, r.L0);
        },
        py::arg("gauge"), py::arg("weight"), py::arg("ell"),
        "Returns (phenomenon, L0).");

    py::class_<DegenerateFamily>(m, "DegenerateFamily")
        .def(py::init<const GrotzschProblem&>(), py::arg("problem"))
        .def_property_readonly("L0", &DegenerateFamily::L0)
        .def_property_readonly("unattainable_bound", &DegenerateFamily::unattainable_bound)
        .def("map", &DegenerateFamily::map, py::arg("j"), py::arg("n_x"), py::arg("n_y"))
        .def("energy", &DegenerateFamily::energy, py::arg("j"));
}
