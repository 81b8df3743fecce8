// Python bindings for the main operations.  Structured results cross the
// boundary as plain dicts/lists converted from the library's JSON reports, so
// the Python surface mirrors the CLI's --json output exactly.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "extorb/catalog.hpp"
#include "extorb/errors.hpp"
#include "extorb/forms.hpp"
#include "extorb/reproduce.hpp"
#include "extorb/twisting.hpp"
#include "extorb/wells.hpp"

namespace py = pybind11;
using namespace extorb;

namespace {

py::object to_py(const nlohmann::json& j) {
    // Looked up per call: a cached static py::object would be destroyed
    // after interpreter finalization and crash on shutdown.
    py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

Caps make_caps(std::uint64_t cap, int workers) {
    Caps caps;
    if (cap > 0) caps.enumeration = cap;
    if (workers > 0) caps.workers = workers;
    return caps;
}

ExtensionClass class_arg(const std::string& text, int p, int m, int n) {
    return parse_class(text, p, m, n);
}

}  // namespace

PYBIND11_MODULE(_extorb, mod) {
    mod.doc() =
        "stabilizers, orbit intersections, and automorphism orders for central "
        "extensions of elementary abelian groups";

    // Translators run newest-first, so the base class must be registered
    // before the subclass for the subclass to win.
    py::register_exception<ExtorbError>(mod, "ExtorbError");
    py::register_exception<CapExceeded>(mod, "CapExceededError");

    mod.def(
        "classify_form",
        [](const std::string& form, int m) {
            const QuadraticFormF2 q = parse_form(form, m);
            const FormTriple t = classify(q);
            const StandardClass sc = standard_class_of(q);
            return to_py(nlohmann::json{
                {"dim", t.dim},
                {"bilrad_dim", t.bilrad_dim},
                {"arf", t.arf},
                {"label", sc.label},
                {"representative", sc.rep.to_text()}});
        },
        py::arg("form"), py::arg("m"),
        "Invariant triple and standard label of a binary quadratic form.");

    mod.def(
        "reduce_form",
        [](const std::string& form, int m) {
            const QuadraticFormF2 q = parse_form(form, m);
            const auto [s, rep] = reduce_to_standard(q);
            return to_py(nlohmann::json{{"standard", rep.to_text()}, {"witness", s.to_json()}});
        },
        py::arg("form"), py::arg("m"), "Standard representative and a change-of-basis witness.");

    mod.def(
        "equivalent_forms",
        [](const std::string& form1, const std::string& form2, int m) {
            return equivalent(parse_form(form1, m), parse_form(form2, m));
        },
        py::arg("form1"), py::arg("form2"), py::arg("m"));

    mod.def(
        "analyze_class",
        [](const std::string& cls, int p, int m, int n, std::uint64_t cap, int workers) {
            AnalyzeOptions opts;
            opts.caps = make_caps(cap, workers);
            const ClassAnalysis a = analyze(class_arg(cls, p, m, n), opts).analysis;
            nlohmann::json j{{"stab_v", a.stab_v.to_json()},
                             {"stab_n", a.stab_n.to_json()},
                             {"joint", a.joint.to_json()},
                             {"omega", a.omega.to_json()},
                             {"breakdown", a.breakdown.to_json()}};
            return to_py(j);
        },
        py::arg("cls"), py::arg("p"), py::arg("m"), py::arg("n"), py::arg("cap") = 0,
        py::arg("workers") = 0,
        "Stabilizers, intersection orbit group, and image-order breakdown of a class.");

    mod.def(
        "aut_order",
        [](const std::string& cls, int p, int m, int n, bool n_characteristic, std::uint64_t cap,
           int workers) {
            return to_py(
                aut_order(class_arg(cls, p, m, n), n_characteristic, make_caps(cap, workers))
                    .to_json());
        },
        py::arg("cls"), py::arg("p"), py::arg("m"), py::arg("n"),
        py::arg("n_characteristic") = false, py::arg("cap") = 0, py::arg("workers") = 0,
        "Automorphism-order ledger of a class.");

    mod.def(
        "semisimple_report",
        [](const std::string& cls, int p, int m, int n, std::uint64_t cap, int workers) {
            return to_py(
                semisimple_report(class_arg(cls, p, m, n), make_caps(cap, workers)).to_json());
        },
        py::arg("cls"), py::arg("p"), py::arg("m"), py::arg("n"), py::arg("cap") = 0,
        py::arg("workers") = 0);

    mod.def(
        "c_chi",
        [](const std::string& chi_json, std::uint64_t cap, int workers, bool brute) {
            const TwistingMap chi = TwistingMap::from_json(nlohmann::json::parse(chi_json));
            const Caps caps = make_caps(cap, workers);
            return to_py((brute ? c_chi_brute(chi, caps) : c_chi(chi, caps)).to_json());
        },
        py::arg("chi_json"), py::arg("cap") = 0, py::arg("workers") = 0, py::arg("brute") = false,
        "Compatibility group of an action given as JSON.");

    mod.def("catalog_names", [] {
        std::vector<std::string> names;
        for (const auto& e : catalog_all()) names.push_back(e.name);
        return names;
    });

    mod.def(
        "catalog_entry",
        [](const std::string& name) {
            const auto e = catalog_get(name);
            if (!e) throw py::key_error("no catalog entry named " + name);
            return to_py(e->to_json());
        },
        py::arg("name"));

    mod.def(
        "reproduce",
        [](const std::string& target, std::uint64_t cap, int workers) {
            return to_py(reproduce(target, make_caps(cap, workers)).to_json());
        },
        py::arg("target"), py::arg("cap") = 0, py::arg("workers") = 0,
        "Run one golden suite and return expected-vs-computed checks.");

    mod.def("reproduce_targets", [] { return reproduce_targets(); });
}
