#include "extorb/reproduce.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "extorb/catalog.hpp"
#include "extorb/errors.hpp"
#include "extorb/forms.hpp"
#include "extorb/twisting.hpp"
#include "extorb/wells.hpp"

namespace extorb {

bool ReproduceResult::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const ReproduceCheck& c) { return c.ok; });
}

std::size_t ReproduceResult::matched() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const ReproduceCheck& c) { return c.ok; }));
}

nlohmann::json ReproduceResult::to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : checks)
        cs.push_back({{"what", c.what},
                      {"expected", c.expected},
                      {"computed", c.computed},
                      {"ok", c.ok}});
    return nlohmann::json{{"target", target},
                          {"checks", cs},
                          {"matched", matched()},
                          {"total", checks.size()},
                          {"ok", ok()},
                          {"elapsed_ms", 0}};
}

const std::vector<std::string>& reproduce_targets() {
    static const std::vector<std::string> t = {"table-5.2.2", "case-5.2.1", "thm-standard-tuples",
                                               "examples", "applications"};
    return t;
}

namespace {

void add_order(ReproduceResult& r, const std::string& what, const BigInt& expected,
               const BigInt& computed) {
    r.checks.push_back({what, expected.str(), computed.str(), expected == computed});
}

void add_text(ReproduceResult& r, const std::string& what, const std::string& expected,
              const std::string& computed) {
    r.checks.push_back({what, expected, computed, expected == computed});
}

void add_flag(ReproduceResult& r, const std::string& what, bool ok) {
    r.checks.push_back({what, "true", ok ? "true" : "false", ok});
}

FpMatrix make_mat(int p, const std::vector<std::vector<int>>& rows) {
    FpMatrix a(p, static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            a.at(static_cast<int>(i), static_cast<int>(j)) =
                static_cast<std::uint8_t>(((rows[i][j] % p) + p) % p);
    return a;
}

ClassAnalysis analyze_class(const ExtensionClass& e, const Caps& caps) {
    AnalyzeOptions opts;
    opts.caps = caps;
    return analyze(e, opts).analysis;
}

struct Breakdown {
    BigInt stab_v, stab_n, omega, im;
};

void check_breakdown(ReproduceResult& r, const std::string& name, const ClassAnalysis& a,
                     const Breakdown& want) {
    std::ostringstream we, wc;
    we << "stab_v=" << want.stab_v << " stab_n=" << want.stab_n << " omega=" << want.omega
       << " im_rho=" << want.im;
    wc << "stab_v=" << a.breakdown.stab_v << " stab_n=" << a.breakdown.stab_n
       << " omega=" << a.breakdown.omega << " im_rho=" << a.breakdown.im_rho;
    r.checks.push_back({name, we.str(), wc.str(), we.str() == wc.str()});
}

bool pairs_contain(const StabilizerReport& rep, const FpMatrix& s, const FpMatrix& t) {
    if (!rep.elements_listed) return false;
    for (const auto& [a, b] : rep.pairs)
        if (a == s && b == t) return true;
    return false;
}

bool elements_contain(const StabilizerReport& rep, const FpMatrix& s) {
    if (!rep.elements_listed) return false;
    for (const auto& a : rep.elements)
        if (a == s) return true;
    return false;
}

// --------------------------------------------------------------------------

ReproduceResult run_table(const Caps& caps) {
    ReproduceResult r;
    r.target = "table-5.2.2";
    for (const CatalogEntry& e : table_5_2_2()) {
        const ClassAnalysis a = analyze_class(e.cls, caps);
        Breakdown want{BigInt(e.expected.at("stab_v_order")), BigInt(e.expected.at("stab_n_order")),
                       BigInt(e.expected.at("omega_order")), BigInt(e.expected.at("im_rho_order"))};
        check_breakdown(r, e.name + " (" + e.notes.substr(0, e.notes.find(';')) + ")", a, want);
    }
    return r;
}

ReproduceResult run_case_521(const Caps& caps) {
    ReproduceResult r;
    r.target = "case-5.2.1";

    // X = Y: component-mixing side contributes the swap, orbits meet only at
    // the class itself.
    struct EqualRow {
        const char* x;
        int stab_v, im;
    };
    const EqualRow equal_rows[] = {
        {"xy", 8, 16}, {"x^2+xy+y^2", 24, 48}, {"x^2+yz", 6, 12}, {"x^2", 24, 48}};
    for (const auto& row : equal_rows) {
        const ExtensionClass e =
            parse_class(std::string(row.x) + "; " + row.x, 2, 3, 2);
        const ClassAnalysis a = analyze_class(e, caps);
        check_breakdown(r, std::string("equal pair (") + row.x + ", " + row.x + ")", a,
                        Breakdown{BigInt(row.stab_v), 2, 1, BigInt(row.im)});
    }

    // X != Y, both components simultaneously standard.
    struct MixedRow {
        const char* x;
        const char* y;
        int stab_v, omega, im;
    };
    const MixedRow mixed_rows[] = {
        {"x^2+yz", "x^2+xy+y^2", 2, 1, 2},
        {"xy", "x^2+xy+y^2", 8, 1, 8},
        {"xy", "y^2+yz+z^2", 8, 1, 8},
        {"xz", "x^2+xy+y^2", 8, 1, 8},
        {"xy", "x^2+yz", 1, 2, 2},
        {"xy", "yz", 1, 6, 6},
        {"xz", "yz", 1, 6, 6},
        {"xz", "xy", 1, 6, 6},
        {"yz", "xz", 1, 6, 6},
    };
    for (const auto& row : mixed_rows) {
        const ExtensionClass e =
            parse_class(std::string(row.x) + "; " + row.y, 2, 3, 2);
        const ClassAnalysis a = analyze_class(e, caps);
        check_breakdown(r, std::string("pair (") + row.x + ", " + row.y + ")", a,
                        Breakdown{BigInt(row.stab_v), 1, BigInt(row.omega), BigInt(row.im)});
    }

    // The displayed order-2 generator of the first mixed stabilizer.
    {
        const ExtensionClass e = parse_class("x^2+yz; x^2+xy+y^2", 2, 3, 2);
        const ClassAnalysis a = analyze_class(e, caps);
        const FpMatrix g = make_mat(2, {{1, 1, 0}, {0, 1, 0}, {0, 1, 1}});
        add_flag(r, "pair (x^2+yz, x^2+xy+y^2): displayed generator fixes both components",
                 elements_contain(a.stab_v, g));
    }
    // The second mixed stabilizer is dihedral of order 8.
    {
        const ExtensionClass e = parse_class("xy; x^2+xy+y^2", 2, 3, 2);
        const ClassAnalysis a = analyze_class(e, caps);
        add_text(r, "pair (xy, x^2+xy+y^2): stabilizer label", "D8",
                 a.stab_v.id ? a.stab_v.id->label : "(none)");
    }

    // Closing example: components equivalent to standard forms only
    // separately.
    {
        const ExtensionClass e = parse_class("xy+y^2; x^2+y^2+yz+z^2", 2, 3, 2);
        const ClassAnalysis a = analyze_class(e, caps);
        check_breakdown(r, "pair (xy+y^2, x^2+y^2+yz+z^2)", a, Breakdown{2, 1, 2, 4});
        const QuadraticFormF2 x = parse_form("xy+y^2", 3);
        const QuadraticFormF2 y = parse_form("x^2+y^2+yz+z^2", 3);
        const FpMatrix s1 = make_mat(2, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
        const FpMatrix s2 = make_mat(2, {{1, 1, 1}, {0, 1, 0}, {0, 0, 1}});
        add_flag(r, "closing example: first reduction witness accepted",
                 change_basis(x, s1) == parse_form("xy", 3));
        add_flag(r, "closing example: second reduction witness accepted",
                 change_basis(y, s2) == parse_form("x^2+yz", 3));
    }
    return r;
}

ReproduceResult run_thm(const Caps& caps) {
    ReproduceResult r;
    r.target = "thm-standard-tuples";

    // Orthogonal-group orders for the two nondegenerate standard forms.
    const std::map<int, int> o_plus = {{2, 2}, {4, 72}};
    const std::map<int, int> o_minus = {{2, 6}, {4, 120}};
    // Component-side stabilizer orders: all components equal (k = n or k = 0)
    // vs a proper split 1 < k < n.
    const std::map<int, int> stab_n_equal = {{1, 1}, {2, 2}, {3, 24}};

    for (int m : {2, 4}) {
        const QuadraticFormF2 x = standard_form(StandardKind::Plus, m, m);
        const QuadraticFormF2 y = standard_form(StandardKind::Minus, m, m);
        for (int n = 1; n <= 3; ++n) {
            for (int k : std::vector<int>{n, 0}) {
                std::vector<ClassComponent> comps;
                for (int i = 0; i < n; ++i) comps.emplace_back(i < k ? x : y);
                const ExtensionClass e(2, m, std::move(comps));
                const ClassAnalysis a = analyze_class(e, caps);
                const std::string name = "m=" + std::to_string(m) + " n=" + std::to_string(n) +
                                         " k=" + std::to_string(k);
                add_order(r, name + ": source stabilizer",
                          BigInt(k == n ? o_plus.at(m) : o_minus.at(m)), a.breakdown.stab_v);
                add_order(r, name + ": component stabilizer", BigInt(stab_n_equal.at(n)),
                          a.breakdown.stab_n);
                add_order(r, name + ": intersection orbit group", 1, a.breakdown.omega);
            }
        }
        // Proper split at n = 3, k = 2: the source stabilizer is the
        // intersection of the two orthogonal groups.
        {
            const ExtensionClass e(2, m, {ClassComponent(x), ClassComponent(x), ClassComponent(y)});
            const ClassAnalysis a = analyze_class(e, caps);
            const ExtensionClass pair(2, m, {ClassComponent(x), ClassComponent(y)});
            const ClassAnalysis ap = analyze_class(pair, caps);
            const std::string name = "m=" + std::to_string(m) + " n=3 k=2";
            add_order(r, name + ": component stabilizer", 4, a.breakdown.stab_n);
            add_order(r, name + ": intersection orbit group", 1, a.breakdown.omega);
            add_order(r, name + ": source stabilizer equals the two-form intersection",
                      ap.breakdown.stab_v, a.breakdown.stab_v);
        }
    }
    return r;
}

ReproduceResult run_examples(const Caps& caps) {
    ReproduceResult r;
    r.target = "examples";

    {
        const CatalogEntry e = u5_class();
        const ClassAnalysis a = analyze_class(e.cls, caps);
        add_order(r, "u5: joint stabilizer order", BigInt(e.expected.at("joint_order")),
                  a.joint.order);
        add_text(r, "u5: joint stabilizer label", e.expected.at("image_label"),
                 a.joint.id ? a.joint.id->label : "(none)");
        const FpMatrix av =
            make_mat(2, {{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 1, 0}});
        const FpMatrix an = make_mat(2, {{0, 0, 1}, {1, 1, 0}, {1, 0, 0}});
        const FpMatrix bv =
            make_mat(2, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 1}});
        const FpMatrix bn = make_mat(2, {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}});
        add_flag(r, "u5: displayed order-4 pair fixes the class", pairs_contain(a.joint, av, an));
        add_flag(r, "u5: displayed order-2 pair fixes the class", pairs_contain(a.joint, bv, bn));
        const bool b_sq = mat_mul(bv, bv) == FpMatrix::identity(4, 2) &&
                          mat_mul(bn, bn) == FpMatrix::identity(3, 2);
        const bool bab = mat_mul(bv, mat_mul(av, bv)) == mat_inv(av) &&
                         mat_mul(bn, mat_mul(an, bn)) == mat_inv(an);
        add_flag(r, "u5: displayed pairs satisfy the dihedral relations", b_sq && bab);
        const AutOrderReport rep = aut_order(e.cls, true, caps);
        add_order(r, "u5: automorphism group order", BigInt(e.expected.at("aut_order")),
                  rep.aut_order);
        add_text(r, "u5: automorphism group order, factored", "2^15",
                 factored_p_part(rep.aut_order, 2));
    }

    for (int p : {3, 5}) {
        const CatalogEntry e = example_4_3_class(p, Example43Variant::WithBockstein);
        const ClassAnalysis a = analyze_class(e.cls, caps);
        const std::string name = "rank-2 source with p-th-power data, p=" + std::to_string(p);
        add_order(r, name + ": image order", BigInt(e.expected.at("im_rho_order")),
                  a.breakdown.im_rho);
        add_flag(r, name + ": image is nonabelian of full linear order",
                 a.joint.id && !a.joint.id->abelian &&
                     a.joint.order == gl_order(2, p));
        const AutOrderReport rep = aut_order(e.cls, true, caps);
        add_order(r, name + ": automorphism group order", BigInt(e.expected.at("aut_order")),
                  rep.aut_order);
    }
    {
        const CatalogEntry e = example_4_3_class(3, Example43Variant::Printed);
        const ClassAnalysis a = analyze_class(e.cls, caps);
        add_order(r, "rank-2 source, printed variant (p=3): joint stabilizer order",
                  BigInt(e.expected.at("joint_order")), a.joint.order);
    }
    {
        const ExtensionClass e = ExtensionClass::zero(2, 1, 1);
        const ClassAnalysis a = analyze_class(e, caps);
        add_order(r, "split class m=n=1: image order", 1, a.breakdown.im_rho);
        add_order(r, "split class m=n=1: automorphism group order", 2,
                  aut_order(e, true, caps).aut_order);
    }
    return r;
}

ReproduceResult run_applications(const Caps& caps) {
    ReproduceResult r;
    r.target = "applications";

    for (int p : {3, 5, 7}) {
        const CatalogEntry e = extraspecial_class(1, p);
        const ClassAnalysis a = analyze_class(e.cls, caps);
        check_breakdown(r, e.name, a,
                        Breakdown{BigInt(e.expected.at("stab_v_order")),
                                  BigInt(e.expected.at("stab_n_order")),
                                  BigInt(e.expected.at("omega_order")),
                                  BigInt(e.expected.at("joint_order"))});
    }

    {
        const CatalogEntry e = w_group_class(2);
        const ClassAnalysis a = analyze_class(e.cls, caps);
        add_order(r, "w-group-2: image order", BigInt(e.expected.at("im_rho_order")),
                  a.breakdown.im_rho);
        std::set<std::string> sigmas;
        if (a.joint.elements_listed)
            for (const auto& [s, t] : a.joint.pairs) sigmas.insert(s.key());
        add_flag(r, "w-group-2: projection to the source side is bijective",
                 BigInt(sigmas.size()) == gl_order(2, 2) && a.joint.order == gl_order(2, 2));
    }

    {
        const CatalogEntry e = u4_class();
        const ClassAnalysis a = analyze_class(e.cls, caps);
        add_order(r, "u4: joint stabilizer order", BigInt(e.expected.at("joint_order")),
                  a.joint.order);
        add_text(r, "u4: joint stabilizer label", e.expected.at("image_label"),
                 a.joint.id ? a.joint.id->label : "(none)");
        const FpMatrix s = make_mat(2, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
        const FpMatrix t = make_mat(2, {{0, 1}, {1, 0}});
        const FpMatrix s3 = make_mat(2, {{1, 0, 1}, {0, 1, 0}, {1, 0, 0}});
        const FpMatrix t3 = make_mat(2, {{0, 1}, {1, 1}});
        add_flag(r, "u4: displayed involution pair fixes the class",
                 pairs_contain(a.joint, s, t));
        add_flag(r, "u4: displayed order-3 pair fixes the class",
                 pairs_contain(a.joint, s3, t3));

        // The same pairs, extended to the next quotient layer, respect the
        // induced action there.
        const TwistingMap chi(2, 3, 3,
                              {make_mat(2, {{1, 0, 0}, {0, 1, 0}, {0, 1, 1}}),
                               FpMatrix::identity(3, 2),
                               make_mat(2, {{1, 0, 0}, {0, 1, 0}, {1, 0, 1}})});
        const FpMatrix t_ext = make_mat(2, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
        const FpMatrix t3_ext = make_mat(2, {{0, 1, 0}, {1, 1, 0}, {0, 0, 1}});
        add_flag(r, "u4: extended involution pair is action-compatible",
                 c_chi_membership(chi, s, t_ext));
        // The displayed order-3 pair composes its two sides in opposite
        // orders; in this implementation's one fixed convention its
        // compatible orientation pairs the inverse source map with the
        // displayed restriction (the generated subgroup is the same).
        add_flag(r, "u4: extended order-3 pair is action-compatible (source side inverted)",
                 c_chi_membership(chi, mat_inv(s3), t3_ext));
    }

    {
        const CatalogEntry e = application_4_e2_class(5);
        const ClassAnalysis a = analyze_class(e.cls, caps);
        add_order(r, "rank-2 alternating class (p=5): joint stabilizer order",
                  BigInt(e.expected.at("joint_order")), a.joint.order);
        bool det_law = a.joint.elements_listed && !a.joint.pairs.empty();
        if (det_law)
            for (const auto& [s, t] : a.joint.pairs) {
                const int want = fp_inv(mat_det(s), 5);
                if (static_cast<int>(t.at(0, 0)) != want) {
                    det_law = false;
                    break;
                }
            }
        add_flag(r, "rank-2 alternating class (p=5): each pair scales by the inverse determinant",
                 det_law);

        const TwistingMap chi = application_4_twisting(5);
        const StabilizerReport c = c_chi(chi, caps);
        add_order(r, "nontrivial action (p=5): compatibility group order", 1600, c.order);
        bool shape_ok = c.elements_listed && !c.pairs.empty();
        if (shape_ok)
            for (const auto& [s, t] : c.pairs) {
                const bool lower = s.at(0, 1) == 0 && t.at(0, 1) == 0;
                const int k = s.at(0, 0);
                const int ratio =
                    (static_cast<int>(t.at(1, 1)) * fp_inv(t.at(0, 0), 5)) % 5;
                if (!lower || k != ratio) {
                    shape_ok = false;
                    break;
                }
            }
        add_flag(r,
                 "nontrivial action (p=5): members are lower triangular with matched diagonal ratio",
                 shape_ok);
        const Subspace ker = twisting_kernel(chi);
        add_flag(r, "nontrivial action (p=5): kernel is spanned by the second generator",
                 ker.dim() == 1 && ker.contains({0, 1}));
        bool ker_ok = c.elements_listed;
        if (ker_ok)
            for (const auto& [s, t] : c.pairs)
                if (!preserves_kernel(chi, s)) {
                    ker_ok = false;
                    break;
                }
        add_flag(r, "nontrivial action (p=5): every member preserves the kernel", ker_ok);
    }
    return r;
}

}  // namespace

ReproduceResult reproduce(const std::string& target, const Caps& caps) {
    if (target == "table-5.2.2") return run_table(caps);
    if (target == "case-5.2.1") return run_case_521(caps);
    if (target == "thm-standard-tuples") return run_thm(caps);
    if (target == "examples") return run_examples(caps);
    if (target == "applications") return run_applications(caps);
    throw ExtorbError("unknown reproduce target: " + target);
}

}  // namespace extorb
