#include "extorb/catalog.hpp"

#include <cstdio>
#include <utility>

#include "extorb/errors.hpp"

namespace extorb {

namespace {

BigInt sp_order(int n, int p) {
    // Order of the symplectic group on a rank-2n space.
    BigInt r = 1;
    for (int i = 0; i < n * n; ++i) r *= p;
    for (int i = 1; i <= n; ++i) {
        BigInt t = 1;
        for (int k = 0; k < 2 * i; ++k) t *= p;
        r *= t - 1;
    }
    return r;
}

BigInt power(int p, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

CatalogEntry table_row(int index, const std::string& y_text, int im_rho, int stab_v,
                       int omega, int column, int row_in_column) {
    CatalogEntry e;
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d", index);
    e.name = std::string("table-5.2.2-row-") + buf;
    e.cls = parse_class("x^2+yz; " + y_text, 2, 3, 2);
    e.expected = {{"im_rho_order", std::to_string(im_rho)},
                  {"stab_v_order", std::to_string(stab_v)},
                  {"stab_n_order", "1"},
                  {"omega_order", std::to_string(omega)}};
    e.provenance = "table-5.2.2 column " + std::to_string(column) + " row " +
                   std::to_string(row_in_column);
    e.notes = "second component " + y_text + "; first component fixed at x^2+yz";
    return e;
}

}  // namespace

nlohmann::json CatalogEntry::to_json() const {
    nlohmann::json exp = nlohmann::json::object();
    for (const auto& [k, v] : expected) exp[k] = v;
    return nlohmann::json{{"name", name},
                          {"class", cls.to_json()},
                          {"class_text", print_class(cls)},
                          {"expected", exp},
                          {"provenance", provenance},
                          {"notes", notes}};
}

CatalogEntry extraspecial_class(int n, int p) {
    check_prime(p);
    if (p == 2) throw DimensionMismatch("extraspecial_class: p must be odd");
    if (n < 1) throw DimensionMismatch("extraspecial_class: n must be >= 1");
    const int m = 2 * n;
    AltBock b(p, m);
    for (int i = 0; i < n; ++i) b.add_alt(2 * i, 2 * i + 1, 1);
    CatalogEntry e;
    e.name = "extraspecial-" + std::to_string(n) + "-" + std::to_string(p);
    e.cls = ExtensionClass(p, m, {ClassComponent(b)});
    const BigInt sp = sp_order(n, p);
    e.expected = {{"joint_order", (BigInt(p - 1) * sp).str()},
                  {"stab_v_order", sp.str()},
                  {"stab_n_order", "1"},
                  {"omega_order", std::to_string(p - 1)}};
    e.provenance = "application-1";
    e.notes = "central quotient class of the extraspecial group of order p^" +
              std::to_string(2 * n + 1) + " and exponent p";
    return e;
}

CatalogEntry w_group_class(int n) {
    if (n < 1) throw DimensionMismatch("w_group_class: n must be >= 1");
    std::vector<ClassComponent> comps;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            QuadraticFormF2 q(n);
            q.add_term(i, j);
            comps.emplace_back(std::move(q));
        }
    CatalogEntry e;
    e.name = "w-group-" + std::to_string(n);
    e.cls = ExtensionClass(2, n, std::move(comps));
    if (n == 1) {
        e.expected = {{"im_rho_order", "1"}};
    } else if (n == 2) {
        e.expected = {{"im_rho_order", "6"}, {"projection_bijective", "true"}};
    }
    e.provenance = "application-2";
    e.notes = "components are all square and product monomials, coefficient order";
    return e;
}

CatalogEntry u4_class() {
    CatalogEntry e;
    e.name = "u4";
    e.cls = parse_class("xy; yz", 2, 3, 2);
    e.expected = {{"joint_order", "6"}, {"im_rho_order", "6"}, {"image_label", "S3"}};
    e.provenance = "application-3";
    e.notes = "upper unitriangular 4x4 group over F_2, second quotient class";
    return e;
}

CatalogEntry u5_class() {
    CatalogEntry e;
    e.name = "u5";
    e.cls = parse_class("x1*x2; x2*x3; x3*x4", 2, 4, 3);
    e.expected = {{"joint_order", "8"}, {"image_label", "D8"}, {"aut_order", "32768"}};
    e.provenance = "example-u5";
    e.notes =
        "upper unitriangular 5x5 group over F_2, second quotient class; variables "
        "x1..x4 stand for the adjacent-transvection generators";
    return e;
}

CatalogEntry example_4_3_class(int p, Example43Variant variant) {
    check_prime(p);
    if (p == 2) throw DimensionMismatch("example_4_3_class: p must be odd");
    AltBock c1(p, 2), c2(p, 2), c3(p, 2);
    c3.add_alt(0, 1, 1);
    const bool with_b = variant == Example43Variant::WithBockstein;
    if (with_b) {
        c1.add_bock(0, 1);
        c2.add_bock(1, 1);
    }
    CatalogEntry e;
    e.name = std::string("example-4-3-") + (with_b ? "bockstein" : "printed") + "-p" +
             std::to_string(p);
    e.cls = ExtensionClass(p, 2, {ClassComponent(c1), ClassComponent(c2), ClassComponent(c3)});
    const BigInt gl2 = gl_order(2, p);
    if (with_b) {
        e.expected = {{"im_rho_order", gl2.str()},
                      {"aut_order", (power(p, 6) * gl2).str()}};
        e.notes =
            "one-form components e_x, e_y record that the first two target "
            "coordinates are p-th powers of the source generators";
    } else {
        // Only the alternating component constrains the pair; two mixing rows
        // stay free, which enlarges the stabilizer beyond the rank-2 general
        // linear group.
        const BigInt joint = gl2 * gl2 * power(p, 2);
        e.expected = {{"joint_order", joint.str()}};
        e.notes = "as printed, without one-form components; stabilizer larger than GL_2";
    }
    e.provenance = "example-4.3";
    return e;
}

CatalogEntry application_4_e2_class(int p) {
    check_prime(p);
    if (p == 2) throw DimensionMismatch("application_4_e2_class: p must be odd");
    AltBock c(p, 2);
    c.add_alt(0, 1, 1);
    CatalogEntry e;
    e.name = "application-4-e2-p" + std::to_string(p);
    e.cls = ExtensionClass(p, 2, {ClassComponent(c)});
    e.expected = {{"joint_order", gl_order(2, p).str()},
                  {"stab_v_order", sp_order(1, p).str()},
                  {"stab_n_order", "1"},
                  {"omega_order", std::to_string(p - 1)}};
    e.provenance = "application-4";
    e.notes = "pairs (s, t) fixing the class satisfy t = (det s)^-1";
    return e;
}

TwistingMap application_4_twisting(int p) {
    check_prime(p);
    FpMatrix a(p, 2, 2);
    a.at(0, 0) = 1;
    a.at(1, 0) = 1;
    a.at(1, 1) = 1;
    return TwistingMap(p, 2, 2, {a, FpMatrix::identity(2, p)});
}

std::vector<CatalogEntry> table_5_2_2() {
    struct Row {
        const char* y;
        int im, stab, omega;
    };
    // Column with image order 2: trivial source stabilizer, order-2 swap group.
    // Column 3: trivial stabilizer, order-3 rotation group.  Column 4:
    // order-2 stabilizer and order-2 swap group.
    static const Row rows[] = {
        {"x^2+xz+yz", 2, 1, 2},
        {"x^2+xy+xz+z^2", 2, 1, 2},
        {"x^2+xz+yz+z^2", 2, 1, 2},
        {"x^2+xy+y^2+yz", 2, 1, 2},
        {"x^2+xy+yz", 2, 1, 2},
        {"x^2+xy+xz+y^2", 2, 1, 2},
        {"xy+xz+y^2", 3, 1, 3},
        {"x^2+xy+xz+y^2+yz", 3, 1, 3},
        {"xz+y^2+yz", 3, 1, 3},
        {"xy+xz+z^2", 3, 1, 3},
        {"x^2+xy+y^2+z^2", 3, 1, 3},
        {"x^2+xz+y^2+z^2", 3, 1, 3},
        {"x^2+xy+z^2", 3, 1, 3},
        {"xz+y^2+yz+z^2", 3, 1, 3},
        {"x^2+xz+y^2", 3, 1, 3},
        {"x^2+xy+xz+yz+z^2", 3, 1, 3},
        {"xy+y^2+yz+z^2", 3, 1, 3},
        {"xy+yz+z^2", 3, 1, 3},
        {"x^2+yz+z^2", 4, 2, 2},
        {"xy+xz+y^2+yz+z^2", 4, 2, 2},
        {"xy+xz+yz", 4, 2, 2},
        {"xz+y^2+z^2", 4, 2, 2},
        {"x^2+y^2+yz", 4, 2, 2},
        {"xy+z^2", 4, 2, 2},
        {"xy+y^2+z^2", 4, 2, 2},
        {"x^2+y^2+yz+z^2", 4, 2, 2},
        {"xz+y^2", 4, 2, 2},
    };
    std::vector<CatalogEntry> out;
    int index = 1;
    int in_col = 1;
    int prev_im = 2;
    for (const Row& r : rows) {
        if (r.im != prev_im) {
            in_col = 1;
            prev_im = r.im;
        }
        const int column = r.im;  // table column header equals the image order
        out.push_back(table_row(index, r.y, r.im, r.stab, r.omega, column, in_col));
        ++index;
        ++in_col;
    }
    return out;
}

std::vector<CatalogEntry> catalog_all() {
    std::vector<CatalogEntry> out;
    out.push_back(extraspecial_class(1, 3));
    out.push_back(extraspecial_class(1, 5));
    out.push_back(extraspecial_class(1, 7));
    out.push_back(extraspecial_class(2, 3));
    out.push_back(w_group_class(1));
    out.push_back(w_group_class(2));
    out.push_back(u4_class());
    out.push_back(u5_class());
    out.push_back(example_4_3_class(3, Example43Variant::Printed));
    out.push_back(example_4_3_class(3, Example43Variant::WithBockstein));
    out.push_back(example_4_3_class(5, Example43Variant::WithBockstein));
    out.push_back(application_4_e2_class(5));
    for (auto& e : table_5_2_2()) out.push_back(std::move(e));
    return out;
}

std::optional<CatalogEntry> catalog_get(const std::string& name) {
    for (auto& e : catalog_all())
        if (e.name == name) return e;
    return std::nullopt;
}

}  // namespace extorb
