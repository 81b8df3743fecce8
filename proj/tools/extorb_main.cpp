// Command-line front end: parse inputs, dispatch the library, emit human
// tables or machine JSON.  Exit codes: 0 success, 1 reproduce mismatch,
// 2 input error, 3 budget exceeded.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "extorb/catalog.hpp"
#include "extorb/errors.hpp"
#include "extorb/forms.hpp"
#include "extorb/reproduce.hpp"
#include "extorb/twisting.hpp"
#include "extorb/wells.hpp"

namespace {

using namespace extorb;

struct Options {
    int p = 2;
    int m = 0;
    int n = 1;
    std::string cls_text;
    std::string form_text;
    std::string form2_text;
    std::string side = "joint";
    std::string chi_text;
    std::string name;
    std::string target;
    std::uint64_t cap = 0;
    int workers = 0;
    bool json = false;
    bool witness = false;
    bool brute = false;
    bool n_characteristic = false;
};

Caps make_caps(const Options& o) {
    Caps caps;
    if (o.cap > 0) {
        caps.enumeration = o.cap;
    } else if (const char* env = std::getenv("EXTORB_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) caps.enumeration = v;
    }
    if (o.workers > 0) {
        caps.workers = o.workers;
    } else {
        const unsigned hw = std::thread::hardware_concurrency();
        caps.workers = hw > 0 ? static_cast<int>(hw) : 1;
    }
    return caps;
}

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

std::string matrix_text(const FpMatrix& a) {
    std::ostringstream out;
    for (int i = 0; i < a.rows; ++i) {
        out << (i ? " " : "[");
        out << "[";
        for (int j = 0; j < a.cols; ++j) out << (j ? "," : "") << static_cast<int>(a.at(i, j));
        out << "]";
        if (i + 1 < a.rows) out << "\n";
    }
    out << "]";
    return out.str();
}

QuadraticFormF2 parse_form_arg(const Options& o, const std::string& text) {
    if (o.p != 2) throw DimensionMismatch("form input is binary-only; use a class JSON for odd p");
    if (o.m < 1) throw DimensionMismatch("--m is required and must be >= 1");
    return parse_form(text, o.m);
}

ExtensionClass parse_class_arg(const Options& o) {
    if (o.cls_text.empty()) throw DimensionMismatch("--class is required for this verb");
    if (o.m < 1) throw DimensionMismatch("--m is required and must be >= 1");
    return parse_class(o.cls_text, o.p, o.m, o.n);
}

TwistingMap parse_chi_arg(const Options& o) {
    if (o.chi_text.empty()) throw DimensionMismatch("--chi is required for this verb");
    std::string text = o.chi_text;
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw DimensionMismatch("--chi is empty");
    if (text[first] != '{') {
        std::ifstream in(text);
        if (!in) throw DimensionMismatch("cannot open action file: " + text);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return TwistingMap::from_json(nlohmann::json::parse(text));
}

int do_classify(const Options& o) {
    const QuadraticFormF2 q = parse_form_arg(o, o.form_text);
    const FormTriple t = classify(q);
    const StandardClass sc = standard_class_of(q);
    if (o.json) {
        emit({{"triple", {{"dim", t.dim}, {"bilrad_dim", t.bilrad_dim}, {"arf", t.arf}}},
              {"label", sc.label},
              {"representative", sc.rep.to_text()}});
    } else {
        std::cout << "triple: (" << t.dim << ", " << t.bilrad_dim << ", " << t.arf << ")\n"
                  << "label: " << sc.label << "\n"
                  << "representative: " << sc.rep.to_text() << "\n";
    }
    return 0;
}

int do_reduce(const Options& o) {
    const QuadraticFormF2 q = parse_form_arg(o, o.form_text);
    const auto [s, rep] = reduce_to_standard(q);
    const StandardClass sc = standard_class_of(q);
    if (o.json) {
        emit({{"standard", rep.to_text()},
              {"label", sc.label},
              {"witness", s.to_json()}});
    } else {
        std::cout << "standard: " << rep.to_text() << "\n"
                  << "label: " << sc.label << "\n"
                  << "witness:\n"
                  << matrix_text(s) << "\n";
    }
    return 0;
}

int do_equiv(const Options& o) {
    const QuadraticFormF2 q1 = parse_form_arg(o, o.form_text);
    const QuadraticFormF2 q2 = parse_form_arg(o, o.form2_text);
    const bool eq = equivalent(q1, q2);
    nlohmann::json witness;
    std::string witness_text;
    if (o.witness && eq) {
        const auto w = equivalence_witness(q1, q2);
        if (w) {
            witness = w->to_json();
            witness_text = matrix_text(*w);
        }
    }
    if (o.json) {
        emit({{"equivalent", eq}, {"witness", witness}});
    } else {
        std::cout << "equivalent: " << (eq ? "true" : "false") << "\n";
        if (!witness_text.empty()) std::cout << "witness:\n" << witness_text << "\n";
    }
    return 0;
}

int do_stab(const Options& o) {
    const ExtensionClass e = parse_class_arg(o);
    const Caps caps = make_caps(o);
    StabilizerReport rep;
    if (o.side == "v") {
        rep = stabilizer_v(e, caps);
    } else if (o.side == "n") {
        rep = stabilizer_n(e, caps);
    } else {
        rep = joint_stabilizer(e, caps);
    }
    if (o.json) {
        emit(rep.to_json());
        return 0;
    }
    std::cout << "side: " << o.side << "\n"
              << "order: " << rep.order << "\n"
              << "method: " << (rep.method == Method::Enumeration ? "enumeration" : "structural")
              << "\n";
    if (rep.id) std::cout << "label: " << rep.id->label << "\n";
    if (o.witness && rep.elements_listed) {
        if (o.side == "joint") {
            for (const auto& [s, t] : rep.pairs)
                std::cout << "pair:\n" << matrix_text(s) << "\n" << matrix_text(t) << "\n";
        } else {
            for (const auto& s : rep.elements) std::cout << "element:\n" << matrix_text(s) << "\n";
        }
    }
    return 0;
}

int do_omega(const Options& o) {
    const ExtensionClass e = parse_class_arg(o);
    const OmegaGroup om = omega(e, make_caps(o));
    if (o.json) {
        emit(om.to_json());
        return 0;
    }
    const GroupId id = om.group_id();
    std::cout << "order: " << om.order() << "\n"
              << "label: " << id.label << "\n";
    if (o.witness)
        for (std::size_t i = 0; i < om.elements.size(); ++i)
            std::cout << "element " << i << ": " << print_class(om.elements[i])
                      << (static_cast<int>(i) == om.identity_index ? "  (identity)" : "") << "\n";
    return 0;
}

int do_imrho(const Options& o) {
    const ExtensionClass e = parse_class_arg(o);
    AnalyzeOptions opts;
    opts.caps = make_caps(o);
    const ClassAnalysis a = analyze(e, opts).analysis;
    if (o.json) {
        nlohmann::json j = a.breakdown.to_json();
        j["omega"] = a.omega.to_json();
        emit(j);
        return 0;
    }
    const GroupId oid = a.omega.group_id();
    std::cout << "stab_v: " << a.breakdown.stab_v << "\n"
              << "stab_n: " << a.breakdown.stab_n << "\n"
              << "omega: " << a.breakdown.omega << " (" << oid.label << ")\n"
              << "im_rho: " << a.breakdown.im_rho << " = " << a.breakdown.stab_v << " · "
              << a.breakdown.stab_n << " · " << a.breakdown.omega << "\n";
    return 0;
}

int do_autorder(const Options& o) {
    const ExtensionClass e = parse_class_arg(o);
    const AutOrderReport rep = aut_order(e, o.n_characteristic, make_caps(o));
    if (o.json) {
        emit(rep.to_json());
        return 0;
    }
    std::cout << "hom_order: " << rep.hom_order << "\n"
              << "stab_v: " << rep.stab_v_order << "\n"
              << "stab_n: " << rep.stab_n_order << "\n"
              << "omega: " << rep.omega_order << "\n"
              << "im_rho: " << rep.im_rho_order << " (" << factored_p_part(rep.im_rho_order, rep.p)
              << ")\n"
              << "aut_order: " << rep.aut_order << " (" << factored_p_part(rep.aut_order, rep.p)
              << ")\n"
              << "counts: "
              << (rep.n_characteristic_assumed
                      ? "the full automorphism group (central subgroup asserted characteristic)"
                      : "automorphisms preserving the chosen central subgroup")
              << "\n";
    if (rep.image_id) std::cout << "image label: " << rep.image_id->label << "\n";
    return 0;
}

int do_cchi(const Options& o) {
    const TwistingMap chi = parse_chi_arg(o);
    const Caps caps = make_caps(o);
    const StabilizerReport rep = o.brute ? c_chi_brute(chi, caps) : c_chi(chi, caps);
    const Subspace ker = twisting_kernel(chi);
    if (o.json) {
        nlohmann::json j = rep.to_json();
        j["kernel_dim"] = ker.dim();
        emit(j);
        return 0;
    }
    std::cout << "order: " << rep.order << "\n"
              << "kernel_dim: " << ker.dim() << "\n";
    if (rep.id) std::cout << "label: " << rep.id->label << "\n";
    if (o.witness && rep.elements_listed)
        for (const auto& [s, t] : rep.pairs)
            std::cout << "pair:\n" << matrix_text(s) << "\n" << matrix_text(t) << "\n";
    return 0;
}

int do_catalog_list(const Options& o) {
    const auto all = catalog_all();
    if (o.json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& e : all) j.push_back({{"name", e.name}, {"provenance", e.provenance}});
        emit(j);
        return 0;
    }
    for (const auto& e : all) std::cout << e.name << "  (" << e.provenance << ")\n";
    return 0;
}

int do_catalog_get(const Options& o) {
    const auto e = catalog_get(o.name);
    if (!e) {
        std::cerr << "error: no catalog entry named " << o.name << "\n";
        return 2;
    }
    if (o.json) {
        emit(e->to_json());
        return 0;
    }
    std::cout << "name: " << e->name << "\n"
              << "class: " << print_class(e->cls) << "\n"
              << "provenance: " << e->provenance << "\n";
    if (!e->notes.empty()) std::cout << "notes: " << e->notes << "\n";
    for (const auto& [k, v] : e->expected) std::cout << "expected " << k << ": " << v << "\n";
    return 0;
}

void print_image_table(const ReproduceResult& res) {
    // Three-column layout; rows 1-6 sit in the first column, 7-18 in the
    // second, 19-27 in the third (matching the catalog's split).
    const auto rows = table_5_2_2();
    std::vector<std::vector<std::string>> cols(3);
    for (std::size_t i = 0; i < rows.size() && i < res.checks.size(); ++i) {
        const std::string full = print_class(rows[i].cls);
        const std::size_t sep = full.find("; ");
        const std::string y = sep == std::string::npos ? full : full.substr(sep + 2);
        const int col = i < 6 ? 0 : (i < 18 ? 1 : 2);
        cols[static_cast<std::size_t>(col)].push_back(y + (res.checks[i].ok ? "" : "  <-- MISMATCH"));
    }
    std::cout << "image order:  2                     3                          4\n";
    const std::size_t height = std::max({cols[0].size(), cols[1].size(), cols[2].size()});
    for (std::size_t i = 0; i < height; ++i) {
        std::ostringstream line;
        auto cell = [&](std::size_t c, std::size_t width) {
            std::string s = i < cols[c].size() ? cols[c][i] : "";
            if (s.size() < width) s += std::string(width - s.size(), ' ');
            return s;
        };
        line << "              " << cell(0, 22) << cell(1, 27) << cell(2, 0);
        std::string text = line.str();
        while (!text.empty() && text.back() == ' ') text.pop_back();
        std::cout << text << "\n";
    }
}

int do_reproduce(const Options& o) {
    const ReproduceResult res = reproduce(o.target, make_caps(o));
    if (o.json) {
        emit(res.to_json());
        return res.ok() ? 0 : 1;
    }
    if (o.target == "table-5.2.2") print_image_table(res);
    for (const auto& c : res.checks) {
        if (c.ok)
            std::cout << "ok       " << c.what << "\n";
        else
            std::cout << "MISMATCH " << c.what << ": expected " << c.expected << ", computed "
                      << c.computed << "\n";
    }
    std::cout << res.matched() << "/" << res.checks.size() << " match\n";
    return res.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"stabilizers, orbit intersections, and automorphism orders for central "
                 "extensions of elementary abelian groups"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub, bool with_class) {
        sub->add_option("--p", o.p, "prime modulus")->capture_default_str();
        sub->add_option("--m", o.m, "source rank");
        if (with_class) {
            sub->add_option("--n", o.n, "component count")->capture_default_str();
            sub->add_option("--class", o.cls_text,
                            "class text (binary: 'xy; yz'; odd p: class JSON)");
        }
        sub->add_option("--cap", o.cap, "enumeration budget override");
        sub->add_option("--workers", o.workers, "worker threads (default: hardware)");
        sub->add_flag("--json", o.json, "machine-readable output");
        return sub;
    };

    CLI::App* c_classify = add_common(app.add_subcommand("classify", "invariant triple of a form"), false);
    c_classify->add_option("--form", o.form_text, "quadratic form text")->required();

    CLI::App* c_reduce = add_common(app.add_subcommand("reduce", "standard representative with witness"), false);
    c_reduce->add_option("--form", o.form_text, "quadratic form text")->required();

    CLI::App* c_equiv = add_common(app.add_subcommand("equiv", "equivalence of two forms"), false);
    c_equiv->add_option("--form", o.form_text, "first form")->required();
    c_equiv->add_option("--form2", o.form2_text, "second form")->required();
    c_equiv->add_flag("--witness", o.witness, "search for a change of basis");

    CLI::App* c_stab = add_common(app.add_subcommand("stab", "stabilizer of a class"), true);
    c_stab->add_option("--side", o.side, "v, n, or joint")
        ->check(CLI::IsMember({"v", "n", "joint"}))
        ->capture_default_str();
    c_stab->add_flag("--witness", o.witness, "print stabilizer elements");

    add_common(app.add_subcommand("omega", "intersection orbit group of a class"), true)
        ->add_flag("--witness", o.witness, "print the group elements");

    add_common(app.add_subcommand("imrho", "image-order breakdown of a class"), true);

    CLI::App* c_autorder = add_common(
        app.add_subcommand("autorder", "automorphism-order ledger of a class"), true);
    c_autorder->add_flag("--n-characteristic", o.n_characteristic,
                         "assert the central subgroup is characteristic");

    CLI::App* c_cchi = add_common(app.add_subcommand("cchi", "compatibility group of an action"), false);
    c_cchi->add_option("--n", o.n, "component count (informational; the action fixes it)");
    c_cchi->add_option("--chi", o.chi_text, "action JSON (inline or a file path)")->required();
    c_cchi->add_flag("--brute", o.brute, "enumerate both factors instead of solving");
    c_cchi->add_flag("--witness", o.witness, "print member pairs");

    CLI::App* c_catalog = app.add_subcommand("catalog", "named classes with expected values");
    c_catalog->require_subcommand(1);
    CLI::App* c_cat_list = c_catalog->add_subcommand("list", "list entry names");
    c_cat_list->add_flag("--json", o.json, "machine-readable output");
    CLI::App* c_cat_get = c_catalog->add_subcommand("get", "show one entry");
    c_cat_get->add_option("name", o.name, "entry name")->required();
    c_cat_get->add_flag("--json", o.json, "machine-readable output");

    CLI::App* c_repro = add_common(app.add_subcommand("reproduce", "run a golden suite"), false);
    c_repro->add_option("target", o.target, "suite name")
        ->required()
        ->check(CLI::IsMember(reproduce_targets()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_classify)) return do_classify(o);
        if (app.got_subcommand(c_reduce)) return do_reduce(o);
        if (app.got_subcommand(c_equiv)) return do_equiv(o);
        if (app.got_subcommand(c_stab)) return do_stab(o);
        if (app.got_subcommand("omega")) return do_omega(o);
        if (app.got_subcommand("imrho")) return do_imrho(o);
        if (app.got_subcommand(c_autorder)) return do_autorder(o);
        if (app.got_subcommand(c_cchi)) return do_cchi(o);
        if (app.got_subcommand(c_catalog)) {
            if (c_catalog->got_subcommand(c_cat_list)) return do_catalog_list(o);
            return do_catalog_get(o);
        }
        if (app.got_subcommand(c_repro)) return do_reproduce(o);
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const WitnessSearchCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ExtorbError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "error: no verb selected\n";
    return 2;
}
