#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <string>
#include <vector>

#include "extorb/catalog.hpp"
#include "extorb/errors.hpp"
#include "extorb/fp.hpp"
#include "extorb/twisting.hpp"

using namespace extorb;

namespace {

std::string pair_key(const std::pair<FpMatrix, FpMatrix>& st) {
    return st.first.key() + "|" + st.second.key();
}

std::set<std::string> pair_keys(const std::vector<std::pair<FpMatrix, FpMatrix>>& v) {
    std::set<std::string> s;
    for (const auto& st : v) s.insert(pair_key(st));
    return s;
}

}  // namespace

TEST_CASE("construction validates the generator images") {
    FpMatrix sing = FpMatrix::from_rows(2, {{1, 1}, {1, 1}});
    CHECK_THROWS_AS(TwistingMap(2, 1, 2, {sing}), SingularMatrix);

    // Image count must equal the acting rank.
    CHECK_THROWS_AS(TwistingMap(2, 2, 2, {FpMatrix::identity(2, 2)}), DimensionMismatch);
    // Image size must equal the acted-on rank.
    CHECK_THROWS_AS(TwistingMap(2, 1, 2, {FpMatrix::identity(3, 2)}), DimensionMismatch);
    // Images must commute pairwise.
    CHECK_THROWS_AS(TwistingMap(2, 2, 2,
                                {FpMatrix::from_rows(2, {{0, 1}, {1, 0}}),
                                 FpMatrix::from_rows(2, {{1, 1}, {0, 1}})}),
                    DimensionMismatch);
    // Image order must divide p: an order-2 matrix is no good at p = 3.
    CHECK_THROWS_AS(TwistingMap(3, 1, 2, {FpMatrix::from_rows(3, {{0, 1}, {1, 0}})}),
                    DimensionMismatch);

    // A valid order-p image passes.
    TwistingMap ok(3, 1, 2, {FpMatrix::from_rows(3, {{1, 1}, {0, 1}})});
    CHECK_FALSE(ok.is_trivial());
}

TEST_CASE("trivial maps and generator image lookup") {
    TwistingMap t = TwistingMap::trivial(3, 2, 2);
    CHECK(t.is_trivial());
    CHECK(t.image_of({1, 2}) == FpMatrix::identity(2, 3));

    TwistingMap chi = application_4_twisting(3);
    CHECK_FALSE(chi.is_trivial());
    CHECK(chi.image_of({0, 0}) == FpMatrix::identity(2, 3));
    CHECK(chi.image_of({1, 0}) == chi.images[0]);
    CHECK(chi.image_of({0, 1}) == chi.images[1]);
    CHECK(chi.image_of({1, 1}) == mat_mul(chi.images[0], chi.images[1]));
    // Exponents add mod p through the homomorphism.
    CHECK(chi.image_of({2, 0}) == mat_mul(chi.images[0], chi.images[0]));
    CHECK_THROWS_AS(chi.image_of({1}), DimensionMismatch);
}

TEST_CASE("JSON round-trip preserves the map") {
    TwistingMap chi = application_4_twisting(5);
    TwistingMap back = TwistingMap::from_json(chi.to_json());
    CHECK(back.p == chi.p);
    CHECK(back.m == chi.m);
    CHECK(back.n == chi.n);
    REQUIRE(back.images.size() == chi.images.size());
    for (std::size_t i = 0; i < chi.images.size(); ++i)
        CHECK(back.images[i] == chi.images[i]);
}

TEST_CASE("the trivial map is compatible with every pair") {
    TwistingMap t = TwistingMap::trivial(3, 2, 1);
    auto r = c_chi(t);
    CHECK(r.order == gl_order(2, 3) * gl_order(1, 3));
    auto b = c_chi_brute(t);
    CHECK(b.order == r.order);
}

TEST_CASE("kernel of the transvection action and its preservation") {
    for (int p : {3, 5}) {
        CAPTURE(p);
        TwistingMap chi = application_4_twisting(p);
        Subspace ker = twisting_kernel(chi);
        CHECK(ker.dim() == 1);
        CHECK(ker.contains({0, 1}));
        CHECK_FALSE(ker.contains({1, 0}));

        // A matrix sending the kernel generator outside the kernel fails.
        FpMatrix swap2 = FpMatrix::from_rows(p, {{0, 1}, {1, 0}});
        CHECK_FALSE(preserves_kernel(chi, swap2));
        CHECK(preserves_kernel(chi, FpMatrix::identity(2, p)));

        // Every compatible pair's source matrix preserves the kernel.
        auto r = c_chi(chi);
        REQUIRE(r.elements_listed);
        for (const auto& [s, t] : r.pairs) CHECK(preserves_kernel(chi, s));
    }
}

TEST_CASE("compatibility group orders and the brute-force cross-check") {
    TwistingMap chi3 = application_4_twisting(3);
    auto fast = c_chi(chi3);
    auto brute = c_chi_brute(chi3);
    CHECK(fast.order == 72);
    CHECK(brute.order == 72);
    REQUIRE(fast.elements_listed);
    REQUIRE(brute.elements_listed);
    CHECK(pair_keys(fast.pairs) == pair_keys(brute.pairs));
    REQUIRE(fast.id.has_value());
    CHECK(fast.id->label == "order-72");

    TwistingMap chi5 = application_4_twisting(5);
    auto r5 = c_chi(chi5);
    CHECK(r5.order == 1600);
    CHECK(r5.pairs.size() == 1600);
}

TEST_CASE("membership predicate agrees with the listed pairs") {
    TwistingMap chi = application_4_twisting(3);
    auto r = c_chi(chi);
    auto members = pair_keys(r.pairs);
    for (const auto& [s, t] : r.pairs) CHECK(c_chi_membership(chi, s, t));

    // Identity pair is always a member; a kernel-breaking source is not.
    FpMatrix i2 = FpMatrix::identity(2, 3);
    CHECK(c_chi_membership(chi, i2, i2));
    CHECK_FALSE(c_chi_membership(chi, FpMatrix::from_rows(3, {{0, 1}, {1, 0}}), i2));

    // Closure under products on a sample.
    const std::size_t lim = std::min<std::size_t>(r.pairs.size(), 24);
    for (std::size_t i = 0; i < lim; ++i)
        for (std::size_t j = 0; j < lim; ++j) {
            FpMatrix s = mat_mul(r.pairs[i].first, r.pairs[j].first);
            FpMatrix t = mat_mul(r.pairs[i].second, r.pairs[j].second);
            CHECK(c_chi_membership(chi, s, t));
            CHECK(members.count(s.key() + "|" + t.key()) == 1);
        }
    // Closure under inverse.
    for (std::size_t i = 0; i < lim; ++i) {
        CHECK(c_chi_membership(chi, mat_inv(r.pairs[i].first), mat_inv(r.pairs[i].second)));
    }
}

TEST_CASE("budgets apply to the compatibility search") {
    TwistingMap chi = application_4_twisting(3);
    Caps tiny;
    tiny.enumeration = 10;
    CHECK_THROWS_AS(c_chi_brute(chi, tiny), CapExceeded);

    Caps short_list;
    short_list.element_list = 5;
    auto r = c_chi(chi, short_list);
    CHECK(r.order == 72);  // order stays exact when listing stops
    CHECK_FALSE(r.elements_listed);
}
