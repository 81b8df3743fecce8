#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "extorb/catalog.hpp"
#include "extorb/errors.hpp"
#include "extorb/extension_class.hpp"
#include "extorb/fp.hpp"
#include "extorb/orbit.hpp"

using namespace extorb;

namespace {

std::vector<FpMatrix> permutation_matrices_3() {
    static const int idx[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    std::vector<FpMatrix> out;
    for (const auto& pi : idx) {
        std::vector<std::vector<int>> rows(3, std::vector<int>(3, 0));
        for (int i = 0; i < 3; ++i) rows[i][pi[i]] = 1;
        out.push_back(FpMatrix::from_rows(2, rows));
    }
    return out;
}

std::set<std::string> key_set(const std::vector<ExtensionClass>& v) {
    std::set<std::string> s;
    for (const auto& e : v) s.insert(e.key());
    return s;
}

void check_omega_is_a_group(const OmegaGroup& om) {
    const int k = static_cast<int>(om.elements.size());
    REQUIRE(k >= 1);
    REQUIRE(om.identity_index >= 0);
    REQUIRE(om.identity_index < k);
    CHECK(om.elements[static_cast<std::size_t>(om.identity_index)] == om.base);
    REQUIRE(om.table.size() == static_cast<std::size_t>(k));
    for (const auto& row : om.table) REQUIRE(row.size() == static_cast<std::size_t>(k));

    // Identity, associativity, and cancellation (rows/columns permute).
    for (int i = 0; i < k; ++i) {
        CHECK(om.table[static_cast<std::size_t>(om.identity_index)][static_cast<std::size_t>(i)] == i);
        CHECK(om.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(om.identity_index)] == i);
        std::set<int> row, col;
        for (int j = 0; j < k; ++j) {
            row.insert(om.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            col.insert(om.table[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        }
        CHECK(row.size() == static_cast<std::size_t>(k));
        CHECK(col.size() == static_cast<std::size_t>(k));
    }
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c) {
                int ab = om.table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                int bc = om.table[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
                CHECK(om.table[static_cast<std::size_t>(ab)][static_cast<std::size_t>(c)] ==
                      om.table[static_cast<std::size_t>(a)][static_cast<std::size_t>(bc)]);
            }

    // The recorded witnesses reproduce the elements from the base class.
    REQUIRE(om.sigma.size() == static_cast<std::size_t>(k));
    REQUIRE(om.reps_left.size() == static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        CHECK(substitute(om.base, om.sigma[ui]) == om.elements[ui]);
        CHECK(om.reps_left[ui] == mat_inv(om.sigma[ui]));
        CHECK(act_v(om.reps_left[ui], om.base) == om.elements[ui]);
    }
}

void check_product_formula(const ClassAnalysis& a) {
    CHECK(a.breakdown.im_rho == a.breakdown.stab_v * a.breakdown.stab_n * a.breakdown.omega);
    CHECK(a.breakdown.im_rho == a.joint.order);
    CHECK(a.breakdown.stab_v == a.stab_v.order);
    CHECK(a.breakdown.stab_n == a.stab_n.order);
    CHECK(a.breakdown.omega == a.omega.order());
}

}  // namespace

TEST_CASE("two-component rank-3 class with image S3") {
    auto res = analyze(u4_class().cls);
    const ClassAnalysis& a = res.analysis;
    CHECK(a.joint.order == 6);
    REQUIRE(a.joint.id.has_value());
    CHECK(a.joint.id->label == "S3");
    CHECK_FALSE(a.joint.id->abelian);
    CHECK(a.breakdown.stab_v == 1);
    CHECK(a.breakdown.stab_n == 1);
    CHECK(a.omega.order() == 6);
    CHECK(a.omega.group_id().label == "S3");
    check_product_formula(a);
    check_omega_is_a_group(a.omega);

    // Every listed joint pair fixes the class.
    const ExtensionClass& e = u4_class().cls;
    REQUIRE(a.joint.elements_listed);
    REQUIRE(a.joint.pairs.size() == 6);
    for (const auto& [s, t] : a.joint.pairs) CHECK(pair_act(s, t, e) == e);
}

TEST_CASE("three-component rank-4 class with image D8") {
    auto res = analyze(u5_class().cls);
    const ClassAnalysis& a = res.analysis;
    CHECK(a.joint.order == 8);
    REQUIRE(a.joint.id.has_value());
    CHECK(a.joint.id->label == "D8");
    CHECK(a.breakdown.stab_v == 1);
    CHECK(a.breakdown.stab_n == 1);
    CHECK(a.breakdown.omega == 8);
    check_product_formula(a);
    check_omega_is_a_group(a.omega);
}

TEST_CASE("orbit sizes satisfy the orbit-stabilizer identity") {
    auto q = parse_class("x^2 + yz", 2, 3, 1);
    auto sv = stabilizer_v(q);
    CHECK(sv.order == 6);
    REQUIRE(sv.id.has_value());
    CHECK(sv.id->label == "S3");
    auto left = orbit(q, Side::V);
    CHECK(BigInt(left.size()) * sv.order == gl_order(3, 2));

    // Every listed stabilizer element really fixes the class, and the listed
    // set is closed under inverse (it is a group).
    REQUIRE(sv.elements_listed);
    std::set<std::string> keys;
    for (const auto& s : sv.elements) {
        CHECK(act_v(s, q) == q);
        keys.insert(s.key());
    }
    for (const auto& s : sv.elements) CHECK(keys.count(mat_inv(s).key()) == 1);

    auto u4 = u4_class().cls;
    CHECK(orbit(u4, Side::V).size() == 168);
    CHECK(orbit(u4, Side::N).size() == 6);

    auto e2 = application_4_e2_class(3).cls;
    CHECK(orbit(e2, Side::V).size() == 2);
    CHECK(orbit(e2, Side::N).size() == 2);
    CHECK(BigInt(orbit(e2, Side::V).size()) * stabilizer_v(e2).order == gl_order(2, 3));

    CHECK_THROWS_AS(orbit(u4, Side::Joint), DimensionMismatch);
}

TEST_CASE("product formula holds across the catalog's cheap entries") {
    for (const auto& entry :
         {u4_class(), u5_class(), w_group_class(1), w_group_class(2), extraspecial_class(1, 3),
          extraspecial_class(1, 5), example_4_3_class(3, Example43Variant::Printed),
          example_4_3_class(3, Example43Variant::WithBockstein), application_4_e2_class(3),
          application_4_e2_class(5)}) {
        CAPTURE(entry.name);
        auto res = analyze(entry.cls);
        check_product_formula(res.analysis);
        check_omega_is_a_group(res.analysis.omega);
    }
}

TEST_CASE("odd-p alternating class splits as determinant kernel times scaling") {
    // One alternating component on two variables: a source matrix rescales it
    // by its determinant, so the source stabilizer is the determinant-1
    // subgroup and the scaling orbit meets every determinant value.
    for (int p : {3, 5}) {
        CAPTURE(p);
        auto e2 = application_4_e2_class(p).cls;
        auto b = im_rho_order(e2);
        BigInt gl = gl_order(2, p);
        BigInt sl = gl / (p - 1);
        CHECK(b.stab_v == sl);
        CHECK(b.stab_n == 1);
        CHECK(b.omega == p - 1);
        CHECK(b.im_rho == gl);
    }
}

TEST_CASE("intersection orbit lies inside both one-sided orbits") {
    auto u4 = u4_class().cls;
    auto om = omega(u4);
    auto left = key_set(orbit(u4, Side::V));
    auto right = key_set(orbit(u4, Side::N));
    for (const auto& e : om.elements) {
        CHECK(left.count(e.key()) == 1);
        CHECK(right.count(e.key()) == 1);
    }
    // Here the intersection group exhausts the component-mixing orbit.
    CHECK(key_set(om.elements) == right);
}

TEST_CASE("intersection order divides the gcd of the one-sided orbit sizes") {
    auto d = divisibility_check(u4_class().cls);
    CHECK(d.omega_order == 6);
    CHECK(d.left_orbit_size == 168);
    CHECK(d.right_orbit_size == 6);
    CHECK(d.gcd_value == 6);
    CHECK(d.divides);

    for (const auto& entry : {u5_class(), w_group_class(2), extraspecial_class(1, 3),
                              application_4_e2_class(5)}) {
        CAPTURE(entry.name);
        auto dc = divisibility_check(entry.cls);
        CHECK(dc.divides);
        CHECK(dc.gcd_value % dc.omega_order == 0);
    }
}

TEST_CASE("image order is constant on joint orbits") {
    auto base = parse_class("xy; x^2 + xy + y^2", 2, 3, 2);
    BigInt expected = im_rho_order(base).im_rho;
    CHECK(expected == 8);

    // Translating the tuple by any (s, t) preserves the image order; the
    // variable relabelings below are instances.
    CHECK(im_rho_order(parse_class("yz; y^2 + yz + z^2", 2, 3, 2)).im_rho == 8);
    CHECK(im_rho_order(parse_class("xz; x^2 + xz + z^2", 2, 3, 2)).im_rho == 8);
    FpMatrix s = FpMatrix::from_rows(2, {{1, 1, 0}, {0, 1, 1}, {0, 0, 1}});
    REQUIRE(mat_invertible(s));
    FpMatrix t = FpMatrix::from_rows(2, {{1, 1}, {0, 1}});
    CHECK(im_rho_order(pair_act(s, t, base)).im_rho == 8);

    // Swapping which variable pairs up changes the tuple's orbit: these
    // nearby-looking tuples have a much smaller image.
    CHECK(im_rho_order(parse_class("xy; y^2 + yz + z^2", 2, 3, 2)).im_rho == 2);
    CHECK(im_rho_order(parse_class("xz; x^2 + xy + y^2", 2, 3, 2)).im_rho == 2);
}

TEST_CASE("restricting the source side to a subgroup restricts the analysis") {
    auto u4 = u4_class().cls;
    auto perms = permutation_matrices_3();
    AnalyzeOptions opt;
    opt.restrict_v = &perms;
    auto res = analyze(u4, opt);
    CHECK(res.analysis.joint.order == 2);
    CHECK(res.analysis.breakdown.stab_v == 1);
    CHECK(res.analysis.breakdown.stab_n == 1);
    CHECK(res.analysis.omega.order() == 2);
    CHECK(res.analysis.omega.elements[1] == parse_class("yz; xy", 2, 3, 2));
    check_omega_is_a_group(res.analysis.omega);
    check_product_formula(res.analysis);
}

TEST_CASE("transposing the enumerated source matrices changes no order") {
    for (const auto& entry : {u4_class(), extraspecial_class(1, 3),
                              example_4_3_class(3, Example43Variant::WithBockstein)}) {
        CAPTURE(entry.name);
        AnalyzeOptions std_opt, tr_opt;
        tr_opt.convention = Convention::Transpose;
        auto a = analyze(entry.cls, std_opt).analysis;
        auto b = analyze(entry.cls, tr_opt).analysis;
        CHECK(a.stab_v.order == b.stab_v.order);
        CHECK(a.stab_n.order == b.stab_n.order);
        CHECK(a.joint.order == b.joint.order);
        CHECK(a.omega.order() == b.omega.order());
    }
}

TEST_CASE("worker count changes no output byte") {
    for (const auto& entry : {u4_class(), extraspecial_class(1, 3)}) {
        CAPTURE(entry.name);
        AnalyzeOptions one, eight;
        one.caps.workers = 1;
        eight.caps.workers = 8;
        auto a = analyze(entry.cls, one).analysis;
        auto b = analyze(entry.cls, eight).analysis;
        CHECK(a.joint.to_json().dump() == b.joint.to_json().dump());
        CHECK(a.stab_v.to_json().dump() == b.stab_v.to_json().dump());
        CHECK(a.omega.to_json().dump() == b.omega.to_json().dump());
        CHECK(a.breakdown.to_json().dump() == b.breakdown.to_json().dump());
    }
}

TEST_CASE("budgets bound the enumeration and the element lists") {
    auto q = parse_class("x^2 + yz", 2, 3, 1);
    Caps tiny;
    tiny.enumeration = 10;
    CHECK_THROWS_AS(stabilizer_v(q, tiny), CapExceeded);
    try {
        stabilizer_v(q, tiny);
    } catch (const CapExceeded& e) {
        CHECK(e.required == "168");
        CHECK(e.cap == "10");
    }

    Caps short_list;
    short_list.element_list = 2;
    auto sv = stabilizer_v(q, short_list);
    CHECK(sv.order == 6);  // order still exact
    CHECK_FALSE(sv.elements_listed);
    CHECK(sv.elements.empty());
    CHECK_FALSE(sv.id.has_value());
}

TEST_CASE("classes fixed by generator pairs") {
    FpMatrix i1 = FpMatrix::identity(1, 2);
    FpMatrix i2 = FpMatrix::identity(2, 2);

    // Trivial generators fix everything: 2^3 classes on two variables.
    CHECK(fixed_classes({{i2, i1}}, 2, 2, 1).size() == 8);

    // Generators of the full source group: only the zero class and the unique
    // orbit-of-size-one form survive.
    FpMatrix swap2 = FpMatrix::from_rows(2, {{0, 1}, {1, 0}});
    FpMatrix shear = FpMatrix::from_rows(2, {{1, 1}, {0, 1}});
    auto fixed = fixed_classes({{swap2, i1}, {shear, i1}}, 2, 2, 1);
    REQUIRE(fixed.size() == 2);
    auto keys = key_set(fixed);
    CHECK(keys.count(ExtensionClass::zero(2, 2, 1).key()) == 1);
    CHECK(keys.count(parse_class("x^2 + xy + y^2", 2, 2, 1).key()) == 1);

    // One variable: the square form is fixed by everything.
    auto small = fixed_classes({{i1, i1}}, 2, 1, 1);
    REQUIRE(small.size() == 2);
    CHECK(key_set(small).count(parse_class("x^2", 2, 1, 1).key()) == 1);

    // Every reported class is indeed fixed.
    for (const auto& e : fixed) {
        CHECK(pair_act(swap2, i1, e) == e);
        CHECK(pair_act(shear, i1, e) == e);
    }
}

TEST_CASE("normalizer quotient orders for explicit subgroups") {
    FpMatrix i2 = FpMatrix::identity(2, 2);
    FpMatrix swap2 = FpMatrix::from_rows(2, {{0, 1}, {1, 0}});
    FpMatrix c3 = FpMatrix::from_rows(2, {{0, 1}, {1, 1}});

    CHECK(normalizer_quotient_order({i2}, 2, 2) == 6);
    CHECK(normalizer_quotient_order({i2, swap2}, 2, 2) == 1);
    CHECK(normalizer_quotient_order({i2, c3, mat_mul(c3, c3)}, 2, 2) == 2);
}

TEST_CASE("group fingerprints name small groups") {
    auto s3 = identify_group_matrices(permutation_matrices_3());
    CHECK(s3.order == 6);
    CHECK_FALSE(s3.abelian);
    CHECK(s3.label == "S3");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> s3_orders = {{1, 1}, {2, 3}, {3, 2}};
    CHECK(s3.element_orders == s3_orders);

    // A cyclic group of order 4 inside GL_2(F_5).
    FpMatrix g = FpMatrix::from_rows(5, {{0, 1}, {4, 0}});
    std::vector<FpMatrix> c4 = {FpMatrix::identity(2, 5), g, mat_mul(g, g),
                                mat_mul(g, mat_mul(g, g))};
    CHECK(identify_group_matrices(c4).label == "Z/4");

    // Klein four-group from an abstract table.
    auto klein = identify_group_mul(4, [](int a, int b) { return a ^ b; });
    CHECK(klein.label == "Z/2 × Z/2");
    CHECK(klein.abelian);

    // Pair version over the joint stabilizer of the rank-3 class.
    auto joint = joint_stabilizer(u4_class().cls);
    REQUIRE(joint.elements_listed);
    CHECK(identify_group_pairs(joint.pairs).label == "S3");
}
