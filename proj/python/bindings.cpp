#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gaugekit/analysis.hpp"
#include "gaugekit/cousin.hpp"
#include "gaugekit/errors.hpp"
#include "gaugekit/expr.hpp"
#include "gaugekit/json_io.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace gaugekit;

namespace {

Modulus to_modulus(const py::object& obj)
{
    if (py::isinstance<Modulus>(obj)) {
        return obj.cast<Modulus>();
    }
    return Modulus::lipschitz(obj.cast<double>());
}

StrategyKind strategy_kind(const std::string& name)
{
    if (name == "greedy") {
        return StrategyKind::GreedyCreep;
    }
    if (name == "bisection") {
        return StrategyKind::Bisection;
    }
    if (name == "hybrid") {
        return StrategyKind::Hybrid;
    }
    throw py::value_error("strategy must be 'greedy', 'bisection' or 'hybrid'");
}

py::dict stall_dict(double c, induction::StallReason reason, std::size_t steps)
{
    py::dict d;
    d["c"] = c;
    d["reason"] = induction::to_string(reason);
    d["steps"] = steps;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Gauge-fine tagged partitions and certified root / extremum search";
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<NotDifferentiable>(m, "NotDifferentiable", error.ptr());
    py::register_exception<GaugeNonpositive>(m, "GaugeNonpositive", error.ptr());
    py::register_exception<NoSignChange>(m, "NoSignChange", error.ptr());
    py::register_exception<CapExceeded>(m, "CapExceeded", error.ptr());
    py::register_exception<TargetHitExactly>(m, "TargetHitExactly", error.ptr());
    py::register_exception<BoundViolated>(m, "BoundViolated", error.ptr());
    py::register_exception<FormatError>(m, "FormatError", error.ptr());

    py::class_<Interval>(m, "Interval")
        .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
        .def_property_readonly("lo", &Interval::lo)
        .def_property_readonly("hi", &Interval::hi)
        .def_property_readonly("width", &Interval::width)
        .def("contains", py::overload_cast<double>(&Interval::contains, py::const_))
        .def(py::self == py::self)
        .def("__repr__", [](const Interval& iv) {
            std::ostringstream os;
            os << "Interval" << iv;
            return os.str();
        });

    py::class_<expr::Expr>(m, "Expr")
        .def(py::init(&expr::parse), py::arg("text"))
        .def("__call__", &expr::Expr::operator())
        .def("__str__", [](const expr::Expr& e) { return expr::to_string(e); })
        .def("__repr__", [](const expr::Expr& e) { return "Expr('" + expr::to_string(e) + "')"; })
        .def(py::self == py::self)
        .def("enclose", &expr::eval_interval, py::arg("interval"))
        .def("derivative", &expr::differentiate)
        .def("lipschitz", &expr::lipschitz_bound, py::arg("interval"), py::arg("floor") = expr::kLipschitzFloor);

    py::class_<Gauge>(m, "Gauge")
        .def_static("constant", &Gauge::constant)
        .def_static("piecewise", &Gauge::piecewise, py::arg("breakpoints"), py::arg("values"))
        .def_static("expression", [](const std::string& text) { return Gauge::expression(expr::parse(text)); })
        .def_static("callable", &Gauge::opaque)
        .def("__call__", &Gauge::operator());

    py::class_<TaggedInterval>(m, "TaggedInterval")
        .def(py::init<Interval, double>(), py::arg("cell"), py::arg("tag"))
        .def_readwrite("cell", &TaggedInterval::cell)
        .def_readwrite("tag", &TaggedInterval::tag);

    py::class_<TaggedPartition>(m, "TaggedPartition")
        .def(py::init<Interval, std::vector<TaggedInterval>>(), py::arg("domain"), py::arg("cells"))
        .def_readwrite("domain", &TaggedPartition::domain)
        .def_readwrite("cells", &TaggedPartition::cells)
        .def("__len__", [](const TaggedPartition& p) { return p.cells.size(); })
        .def("to_json", &io::partition_to_json)
        .def_static("from_json", &io::partition_from_json);

    py::class_<FinenessReport>(m, "FinenessReport")
        .def_readonly("fine", &FinenessReport::fine)
        .def_readonly("first_violation", &FinenessReport::first_violation)
        .def_readonly("margin", &FinenessReport::margin);

    m.def("validate_partition", [](const TaggedPartition& p) {
        std::vector<std::tuple<std::string, std::size_t, std::string>> out;
        for (const auto& v : validate_partition(p).violations) {
            out.emplace_back(to_string(v.kind), v.index, v.message);
        }
        return out;
    }, "List of (kind, index, message) for every broken invariant.");
    m.def("is_delta_fine", &is_delta_fine, py::arg("partition"), py::arg("gauge"));
    m.def("concat", &concat);

    m.def(
        "fine_partition",
        [](const Gauge& g, const Interval& dom, const std::string& strategy, std::size_t max_cells,
           std::size_t max_depth) -> py::object {
            const auto r = fine_partition(g, dom, PartitionStrategy{strategy_kind(strategy), {max_cells, max_depth}});
            if (const auto* p = std::get_if<TaggedPartition>(&r)) {
                return py::cast(*p);
            }
            const auto& fail = std::get<PartitionFailure>(r);
            py::dict d;
            if (fail.creep) {
                d["creep_frontier"] = fail.creep->frontier;
            }
            if (fail.bisection) {
                d["deepest_cell"] = fail.bisection->deepest_cell;
            }
            return d;
        },
        py::arg("gauge"), py::arg("domain"), py::arg("strategy") = "hybrid",
        py::arg("max_cells") = PartitionCaps{}.max_cells, py::arg("max_depth") = PartitionCaps{}.max_depth,
        "A TaggedPartition, or a dict describing the stall.");

    py::class_<Modulus>(m, "Modulus")
        .def_static("lipschitz", &Modulus::lipschitz)
        .def_static("hoelder", &Modulus::hoelder, py::arg("C"), py::arg("alpha"))
        .def_static("custom", &Modulus::custom)
        .def("step", &Modulus::step);

    py::enum_<Side>(m, "Side").value("BELOW", Side::Below).value("ABOVE", Side::Above);

    py::class_<CertificatePiece>(m, "CertificatePiece")
        .def_readonly("cell", &CertificatePiece::cell)
        .def_readonly("sample", &CertificatePiece::sample)
        .def_readonly("value", &CertificatePiece::value)
        .def_readwrite("radius", &CertificatePiece::radius);

    py::class_<SignCertificate>(m, "SignCertificate")
        .def_readonly("target", &SignCertificate::target)
        .def_readwrite("side", &SignCertificate::side)
        .def_readwrite("pieces", &SignCertificate::pieces)
        .def("to_json", [](const SignCertificate& c) { return io::certificate_to_json(c); });

    py::class_<BoundCertificate>(m, "BoundCertificate")
        .def_readwrite("bound", &BoundCertificate::bound)
        .def_readwrite("pieces", &BoundCertificate::pieces)
        .def("to_json", [](const BoundCertificate& c) { return io::certificate_to_json(c); });

    m.def("certificate_from_json", &io::certificate_from_json);

    py::class_<RootResult>(m, "RootResult")
        .def_readonly("c", &RootResult::c)
        .def_readonly("residual_bound", &RootResult::residual_bound);

    py::class_<SupEstimate>(m, "SupEstimate")
        .def_readonly("lo", &SupEstimate::lo)
        .def_readonly("hi", &SupEstimate::hi)
        .def_readonly("candidate", &SupEstimate::candidate);

    m.def(
        "find_root",
        [](const RealFunction& f, double y, const Interval& dom, const py::object& mod, double tol) {
            return find_root(f, y, dom, to_modulus(mod), tol);
        },
        py::arg("f"), py::arg("y"), py::arg("domain"), py::arg("modulus"), py::arg("tol") = 1e-6,
        "modulus is a Modulus or a Lipschitz constant.");
    m.def(
        "approx_sup",
        [](const RealFunction& f, const Interval& dom, const py::object& mod, double tol) {
            return approx_sup(f, dom, to_modulus(mod), tol);
        },
        py::arg("f"), py::arg("domain"), py::arg("modulus"), py::arg("tol") = 1e-6);
    m.def(
        "approx_inf",
        [](const RealFunction& f, const Interval& dom, const py::object& mod, double tol) {
            return approx_inf(f, dom, to_modulus(mod), tol);
        },
        py::arg("f"), py::arg("domain"), py::arg("modulus"), py::arg("tol") = 1e-6);
    m.def(
        "no_root_certificate",
        [](const RealFunction& f, double y, const Interval& dom, const py::object& mod) -> py::object {
            auto r = no_root_certificate(f, y, dom, to_modulus(mod));
            if (auto* cert = std::get_if<SignCertificate>(&r)) {
                return py::cast(std::move(*cert));
            }
            const auto& s = std::get<StallAtRoot>(r);
            return stall_dict(s.c, s.reason, s.step_history.size());
        },
        py::arg("f"), py::arg("y"), py::arg("domain"), py::arg("modulus"),
        "A SignCertificate, or a dict {c, reason, steps} when the creep stalls.");
    m.def(
        "bound_certificate",
        [](const RealFunction& f, double bound, const Interval& dom, const py::object& mod) -> py::object {
            auto r = bound_certificate(f, bound, dom, to_modulus(mod));
            if (auto* cert = std::get_if<BoundCertificate>(&r)) {
                return py::cast(std::move(*cert));
            }
            const auto& s = std::get<StallNearMax>(r);
            return stall_dict(s.c, s.reason, s.step_history.size());
        },
        py::arg("f"), py::arg("bound"), py::arg("domain"), py::arg("modulus"));
    m.def(
        "verify_sign_certificate",
        [](const SignCertificate& c, const RealFunction& f, const py::object& mod, std::optional<Interval> dom) {
            return verify_sign_certificate(c, f, to_modulus(mod), dom);
        },
        py::arg("certificate"), py::arg("f"), py::arg("modulus"), py::arg("domain") = py::none());
    m.def(
        "verify_bound_certificate",
        [](const BoundCertificate& c, const RealFunction& f, const py::object& mod, std::optional<Interval> dom) {
            return verify_bound_certificate(c, f, to_modulus(mod), dom);
        },
        py::arg("certificate"), py::arg("f"), py::arg("modulus"), py::arg("domain") = py::none());
}
