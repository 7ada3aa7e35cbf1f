#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dicke2/dynamics.hpp"
#include "dicke2/quantum.hpp"
#include "dicke2/stability.hpp"
#include "dicke2/steady_state.hpp"
#include "dicke2/sweep.hpp"

namespace py = pybind11;
using namespace dicke2;

namespace {

py::dict state_dict(const MeanFieldState& s) {
    py::dict d;
    d["a"] = s.a;
    d["s1"] = py::make_tuple(s.s1.x, s.s1.y, s.s1.z);
    d["s2"] = py::make_tuple(s.s2.x, s.s2.y, s.s2.z);
    return d;
}

MeanFieldState state_from(complexd a, std::array<double, 3> s1, std::array<double, 3> s2) {
    MeanFieldState s;
    s.a = a;
    s.s1 = {s1[0], s1[1], s1[2]};
    s.s2 = {s2[0], s2[1], s2[2]};
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-ensemble Dicke model: steady states, stability, dynamics, Lindblad solver";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double omega_c, double omega_a, double kappa, double lambda_,
                         double n1, double n2) {
                 ModelParams p{omega_c, omega_a, kappa, lambda_, n1, n2};
                 p.validate();
                 return p;
             }),
             py::arg("omega_c") = 1.0, py::arg("omega_a") = 1.0, py::arg("kappa") = 1.0,
             py::arg("lambda_") = 0.0, py::arg("n1") = 1.0, py::arg("n2") = 0.0)
        .def_readwrite("omega_c", &ModelParams::omega_c)
        .def_readwrite("omega_a", &ModelParams::omega_a)
        .def_readwrite("kappa", &ModelParams::kappa)
        .def_readwrite("lambda_", &ModelParams::lambda)
        .def_readwrite("n1", &ModelParams::n1)
        .def_readwrite("n2", &ModelParams::n2)
        .def("validate", &ModelParams::validate)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(omega_c=" + std::to_string(p.omega_c) +
                   ", omega_a=" + std::to_string(p.omega_a) + ", kappa=" +
                   std::to_string(p.kappa) + ", lambda_=" + std::to_string(p.lambda) +
                   ", n1=" + std::to_string(p.n1) + ", n2=" + std::to_string(p.n2) + ")";
        });

    py::class_<MeanFieldState>(m, "MeanFieldState")
        .def(py::init(&state_from), py::arg("a") = complexd(0.0, 0.0),
             py::arg("s1") = std::array<double, 3>{0.0, 0.0, 0.0},
             py::arg("s2") = std::array<double, 3>{0.0, 0.0, 0.0})
        .def_property(
            "a", [](const MeanFieldState& s) { return s.a; },
            [](MeanFieldState& s, complexd v) { s.a = v; })
        .def_property(
            "s1", [](const MeanFieldState& s) { return py::make_tuple(s.s1.x, s.s1.y, s.s1.z); },
            [](MeanFieldState& s, std::array<double, 3> v) { s.s1 = {v[0], v[1], v[2]}; })
        .def_property(
            "s2", [](const MeanFieldState& s) { return py::make_tuple(s.s2.x, s.s2.y, s.s2.z); },
            [](MeanFieldState& s, std::array<double, 3> v) { s.s2 = {v[0], v[1], v[2]}; })
        .def("to_dict", &state_dict);

    m.def("eom_rhs", &eom_rhs, py::arg("state"), py::arg("params"));
    m.def("energy", &energy, py::arg("state"), py::arg("params"));
    m.def("parity_transform", &parity_transform, py::arg("state"));
    m.def("scale_transform", &scale_transform, py::arg("state"), py::arg("params"),
          py::arg("c"));
    m.def("distance", &distance, py::arg("lhs"), py::arg("rhs"));
    m.def("to_coords", &to_coords, py::arg("state"));

    py::enum_<PhaseLabel>(m, "PhaseLabel")
        .value("zfo_n_plus", PhaseLabel::zfo_n_plus)
        .value("zfo_n_minus", PhaseLabel::zfo_n_minus)
        .value("zfi_n_plus", PhaseLabel::zfi_n_plus)
        .value("zfi_n_minus", PhaseLabel::zfi_n_minus)
        .value("xfo_sr_plus", PhaseLabel::xfo_sr_plus)
        .value("xfo_sr_minus", PhaseLabel::xfo_sr_minus)
        .value("xfi_sr_plus", PhaseLabel::xfi_sr_plus)
        .value("xfi_sr_minus", PhaseLabel::xfi_sr_minus);
    m.def("phase_label_str", [](PhaseLabel l, bool equal) { return to_string(l, equal); },
          py::arg("label"), py::arg("equal_ensembles") = false);

    py::class_<CriticalCouplings>(m, "CriticalCouplings")
        .def_readonly("xfo", &CriticalCouplings::xfo)
        .def_readonly("xfi", &CriticalCouplings::xfi);
    m.def("critical_couplings", &critical_couplings, py::arg("params"));

    py::class_<FixedPointRecord>(m, "FixedPointRecord")
        .def_readonly("label", &FixedPointRecord::label)
        .def_readonly("state", &FixedPointRecord::state)
        .def_readonly("exists", &FixedPointRecord::exists)
        .def_readonly("energy", &FixedPointRecord::energy);
    m.def("normal_fixed_points", &normal_fixed_points, py::arg("params"));
    m.def("superradiant_fixed_points", &superradiant_fixed_points, py::arg("params"));
    m.def("all_fixed_points", &all_fixed_points, py::arg("params"));

    m.def("jacobian", [](const MeanFieldState& s, const ModelParams& p) -> Eigen::MatrixXd {
        return jacobian(s, p);
    });
    m.def("eigenvalues", [](const Eigen::MatrixXd& mat) {
        if (mat.rows() != 8 || mat.cols() != 8)
            throw DomainError("eigenvalues: expected an 8x8 matrix");
        const Spectrum evs = eigenvalues(Mat8(mat));
        return std::vector<complexd>(evs.begin(), evs.end());
    });

    py::enum_<Verdict>(m, "Verdict")
        .value("stable", Verdict::stable)
        .value("unstable", Verdict::unstable)
        .value("marginal", Verdict::marginal);

    py::class_<StabilityReport>(m, "StabilityReport")
        .def_property_readonly("eigenvalues",
                               [](const StabilityReport& r) {
                                   return std::vector<complexd>(r.eigenvalues.begin(),
                                                                r.eigenvalues.end());
                               })
        .def_readonly("verdict", &StabilityReport::verdict)
        .def_readonly("zero_modes_excluded", &StabilityReport::zero_modes_excluded)
        .def_readonly("precession_modes_excluded", &StabilityReport::precession_modes_excluded)
        .def_readonly("leading", &StabilityReport::leading);
    m.def(
        "classify_stability",
        [](const FixedPointRecord& fp, const ModelParams& p) { return classify_stability(fp, p); },
        py::arg("fixed_point"), py::arg("params"));

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("max_norm_drift", &Trajectory::max_norm_drift)
        .def_property_readonly("states",
                               [](const Trajectory& t) {
                                   Eigen::MatrixXd out(t.states.size(), 8);
                                   for (std::size_t i = 0; i < t.states.size(); ++i) {
                                       const auto c = to_coords(t.states[i]);
                                       for (int k = 0; k < 8; ++k)
                                           out(static_cast<Eigen::Index>(i), k) =
                                               c[static_cast<std::size_t>(k)];
                                   }
                                   return out;
                               })
        .def_property_readonly("energies", [](const Trajectory& t) {
            std::vector<double> e;
            e.reserve(t.observables.size());
            for (const auto& o : t.observables) e.push_back(o.energy);
            return e;
        });
    m.def(
        "integrate",
        [](const MeanFieldState& initial, const ModelParams& p, double t_final,
           std::size_t samples, double rel_tol, double abs_tol) {
            IntegrationControls c;
            c.rel_tol = rel_tol;
            c.abs_tol = abs_tol;
            return integrate(initial, p, t_final, samples, c);
        },
        py::arg("initial"), py::arg("params"), py::arg("t_final"), py::arg("samples") = 2000,
        py::arg("rel_tol") = 1e-11, py::arg("abs_tol") = 1e-13);

    py::class_<AttractorVerdict>(m, "AttractorVerdict")
        .def_property_readonly("kind",
                               [](const AttractorVerdict& v) {
                                   switch (v.kind) {
                                       case AttractorVerdict::Kind::fixed_point:
                                           return "fixed_point";
                                       case AttractorVerdict::Kind::limit_cycle:
                                           return "limit_cycle";
                                       default: return "undecided";
                                   }
                               })
        .def_readonly("label", &AttractorVerdict::label)
        .def_readonly("period", &AttractorVerdict::period)
        .def_readonly("amplitude", &AttractorVerdict::amplitude)
        .def_readonly("transient_end", &AttractorVerdict::transient_end);
    m.def(
        "classify_attractor",
        [](const Trajectory& traj, const std::vector<FixedPointRecord>& fps,
           const ModelParams& p) { return classify_attractor(traj, fps, p); },
        py::arg("trajectory"), py::arg("fixed_points"), py::arg("params"));
    m.def("perturbed_fixed_point", &perturbed_fixed_point, py::arg("fixed_point"),
          py::arg("delta_a"));

    py::class_<HilbertSpec>(m, "HilbertSpec")
        .def(py::init([](int n_max, int N1, int N2) {
                 HilbertSpec s{n_max, N1, N2};
                 s.validate();
                 return s;
             }),
             py::arg("n_max"), py::arg("N1"), py::arg("N2"))
        .def_readonly("n_max", &HilbertSpec::n_max)
        .def_readonly("N1", &HilbertSpec::N1)
        .def_readonly("N2", &HilbertSpec::N2)
        .def("dim", &HilbertSpec::dim);

    m.def("coherent_spin_state", &coherent_spin_state, py::arg("j"), py::arg("theta"),
          py::arg("phi"));
    m.def("coherent_field_state", &coherent_field_state, py::arg("n_max"), py::arg("alpha"));
    m.def("product_state", &product_state, py::arg("spec"), py::arg("field"), py::arg("spin1"),
          py::arg("spin2"));
    m.def("hamiltonian_dense",
          [](const ModelParams& p, const HilbertSpec& spec) -> Eigen::MatrixXcd {
              return DenseC(hamiltonian(p, build_operators(spec)));
          });
    m.def("partial_trace_field", &partial_trace_field, py::arg("rho"), py::arg("spec"));

    py::class_<ObservableSample>(m, "ObservableSample")
        .def_readonly("t", &ObservableSample::t)
        .def_readonly("exp_a", &ObservableSample::exp_a)
        .def_readonly("n_phot", &ObservableSample::n_phot)
        .def_readonly("s1x", &ObservableSample::s1x)
        .def_readonly("s1y", &ObservableSample::s1y)
        .def_readonly("s1z", &ObservableSample::s1z)
        .def_readonly("s2x", &ObservableSample::s2x)
        .def_readonly("s2y", &ObservableSample::s2y)
        .def_readonly("s2z", &ObservableSample::s2z)
        .def_readonly("sz_total", &ObservableSample::sz_total)
        .def_readonly("dsx", &ObservableSample::dsx);

    py::class_<EvolveResult>(m, "EvolveResult")
        .def_readonly("rho_final", &EvolveResult::rho_final)
        .def_readonly("samples", &EvolveResult::samples)
        .def_readonly("max_trace_drift", &EvolveResult::max_trace_drift)
        .def_readonly("max_herm_dev", &EvolveResult::max_herm_dev)
        .def_readonly("max_top_population", &EvolveResult::max_top_population)
        .def_readonly("truncation_warning", &EvolveResult::truncation_warning);
    m.def(
        "evolve_master",
        [](const DenseC& rho0, const ModelParams& p, const HilbertSpec& spec, double t_final,
           double dt, std::size_t n_samples) {
            EvolveControls c;
            c.n_samples = n_samples;
            return evolve_master(rho0, p, spec, t_final, dt, c);
        },
        py::arg("rho0"), py::arg("params"), py::arg("spec"), py::arg("t_final"), py::arg("dt"),
        py::arg("n_samples") = 200);

    py::class_<QFunctionGrid>(m, "QFunctionGrid")
        .def_readonly("re_axis", &QFunctionGrid::re_axis)
        .def_readonly("im_axis", &QFunctionGrid::im_axis)
        .def_readonly("values", &QFunctionGrid::values);
    m.def("husimi_q", &husimi_q, py::arg("rho_field"), py::arg("re_axis"), py::arg("im_axis"));
    m.def("husimi_q_auto", &husimi_q_auto, py::arg("rho_field"), py::arg("points_per_axis") = 101);
    m.def("q_grid_integral", &q_grid_integral, py::arg("grid"));

    py::class_<Lobe>(m, "Lobe")
        .def_readonly("weight", &Lobe::weight)
        .def_readonly("centroid", &Lobe::centroid)
        .def_readonly("cells", &Lobe::cells);
    py::class_<LobeReport>(m, "LobeReport")
        .def_readonly("count", &LobeReport::count)
        .def_readonly("lobes", &LobeReport::lobes);
    m.def("count_q_lobes", &count_q_lobes, py::arg("grid"), py::arg("threshold_fraction"));

    m.attr("__version__") = "0.1.0";
}
