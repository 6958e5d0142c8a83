#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "conespec/asymptotics.hpp"
#include "conespec/cli.hpp"
#include "conespec/index.hpp"
#include "conespec/indexsets.hpp"
#include "conespec/traces.hpp"

namespace py = pybind11;
using namespace conespec;

namespace {

std::vector<double> geom(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    return v;
}

py::list terms_of(const LogPolyExpansion& f) {
    py::list out;
    for (const auto& t : f.terms)
        out.append(py::dict(py::arg("gamma") = t.gamma, py::arg("log_power") = t.j, py::arg("coeff") = t.c,
                            py::arg("detected") = t.detected));
    return out;
}

IndexSet set_of(const std::vector<std::pair<double, int>>& v, double cutoff, bool cinf) {
    std::vector<IndexEntry> e;
    for (auto [z, k] : v) e.push_back({cplx(z, 0.0), k});
    return IndexSet::from_entries(e, cutoff, cinf);
}

std::vector<std::pair<cplx, int>> pairs_of(const IndexSet& s) {
    std::vector<std::pair<cplx, int>> out;
    for (const auto& e : s.entries()) out.push_back({e.z, e.k});
    return out;
}

} // namespace

PYBIND11_MODULE(_conespec, m) {
    m.doc() = "cone operator spectral asymptotics";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<PoleError>(m, "PoleError", PyExc_ArithmeticError);

    py::class_<ConeOperator>(m, "ConeOperator")
        .def_static("laplace_type", &ConeOperator::laplace_type, py::arg("a"), py::arg("modes"), py::arg("mu") = 2.0,
                    py::arg("alpha") = 1.0, py::arg("perturbation") = 0.0)
        .def_static("from_text", [](const std::string& t) { return ConeOperator::from_config(Config::parse(t)); })
        .def_readonly("mu", &ConeOperator::mu)
        .def_readonly("alpha", &ConeOperator::alpha)
        .def_readonly("modes", &ConeOperator::modes)
        .def("frozen", &ConeOperator::frozen)
        .def("to_text", &ConeOperator::to_text);

    m.def(
        "boundary_spectrum",
        [](const ConeOperator& op, double strip) {
            std::vector<std::tuple<int, cplx, int>> out;
            for (const auto& p : boundary_spectrum(op, strip, op.modes).poles) out.push_back({p.mode, p.sigma, p.ord});
            return out;
        },
        py::arg("op"), py::arg("strip") = 3.0, "(mode, sigma, order) per pole");

    m.def("bessel_eigenvalues", &bessel_oracle, py::arg("nu"), py::arg("count"));

    m.def(
        "discrete_eigenvalues",
        [](const ConeOperator& op, int mode, double s_min, int npoints) {
            Discretization d = discretize(op, s_min, npoints);
            return d.eigenvalues(d.index_of(mode));
        },
        py::arg("op"), py::arg("mode") = 0, py::arg("s_min") = -12.0, py::arg("npoints") = 2000);

    m.def(
        "heat_trace",
        [](const ConeOperator& op, const std::vector<double>& t) {
            double tmin = *std::min_element(t.begin(), t.end());
            return heat_trace(oracle_spectrum(op.frozen(), 40.0 / tmin), t, 1e-10).values();
        },
        py::arg("op"), py::arg("t"), "Tr e^{-tA} from the Bessel spectrum");

    m.def(
        "fit_heat",
        [](const ConeOperator& op, double t_min, double t_max, int samples, int k_max) {
            TraceSeries h = heat_trace(oracle_spectrum(op.frozen(), 40.0 / t_min), geom(t_min, t_max, samples), 1e-10);
            return terms_of(fit_expansion(h, predict_terms(h.meta, SeriesKind::Heat, k_max), t_min, t_max));
        },
        py::arg("op"), py::arg("t_min") = 1e-4, py::arg("t_max") = 2e-2, py::arg("samples") = 41,
        py::arg("k_max") = 3);

    m.def(
        "zeta",
        [](const ConeOperator& op, const std::vector<cplx>& z, double t_min, double t_max, int samples) {
            SpectralData sd = oracle_spectrum(op.frozen(), 40.0 / t_min);
            TraceSeries h = heat_trace(sd, geom(t_min, t_max, samples), 1e-10);
            LogPolyExpansion f = fit_expansion(h, predict_terms(h.meta, SeriesKind::Heat, 3), t_min, t_max);
            ZetaOptions o;
            o.t0 = t_max;
            o.coefficient_floor = 1e-6;
            ZetaResult r = zeta_continue(sd, f, z, o);
            py::list poles;
            for (const auto& p : r.poles)
                poles.append(py::dict(py::arg("z") = p.z, py::arg("order") = p.order, py::arg("residue") = p.residue,
                                      py::arg("tag") = p.lattice_tag));
            return py::make_tuple(r.values, poles);
        },
        py::arg("op"), py::arg("z"), py::arg("t_min") = 1e-4, py::arg("t_max") = 2e-2, py::arg("samples") = 41,
        "(values, poles) of the continued zeta function");

    m.def("mckean_singer", &mckean_singer, py::arg("B"), py::arg("t"));

    m.def(
        "eta_rank_one",
        [](cplx c, double b, double weight, double R_max) {
            EtaResult e = eta_term(MellinPerturbation::rank_one(c, b, weight), R_max);
            return py::make_tuple(e.eta, e.imag_residue);
        },
        py::arg("c"), py::arg("b"), py::arg("weight") = 1.0, py::arg("R_max") = 200.0);

    m.def(
        "index_rank_one",
        [](const Eigen::MatrixXcd& B, cplx c, double b, double weight) {
            IndexReport r = index_assemble({B, MellinPerturbation::rank_one(c, b, weight)});
            return py::dict(py::arg("omega") = r.omega, py::arg("eta") = r.eta, py::arg("index") = r.index,
                            py::arg("integer_distance") = r.integer_distance, py::arg("flags") = r.flags);
        },
        py::arg("B"), py::arg("c"), py::arg("b"), py::arg("weight") = 1.0);

    m.def(
        "extended_union",
        [](const std::vector<std::pair<double, int>>& e, const std::vector<std::pair<double, int>>& f, double cutoff) {
            return pairs_of(extended_union(set_of(e, cutoff, false), set_of(f, cutoff, false)));
        },
        py::arg("e"), py::arg("f"), py::arg("cutoff") = 6.0, "index sets as (exponent, log power) lists");

    m.def(
        "run",
        [](const std::string& sub, const std::string& config, const std::string& out, std::uint64_t seed) {
            RunOptions o;
            o.out_dir = out;
            o.seed = seed;
            std::ostringstream log;
            int code = run(sub, Config::load(config), o, log);
            return py::make_tuple(code, log.str());
        },
        py::arg("subcommand"), py::arg("config"), py::arg("out"), py::arg("seed") = 1);
}
