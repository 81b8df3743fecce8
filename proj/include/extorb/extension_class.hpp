#pragma once

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "extorb/forms.hpp"
#include "extorb/fp.hpp"

namespace extorb {

// One coordinate of a class tuple: a quadratic form for p = 2, an
// alternating-form/one-form pair for odd p.
using ClassComponent = std::variant<QuadraticFormF2, AltBock>;

bool component_is_zero(const ClassComponent& c);
ClassComponent component_substituted(const ClassComponent& c, const FpMatrix& M);
nlohmann::json component_to_json(const ClassComponent& c);

// A class tuple [E] = (X_1, ..., X_n) over F_p in m source variables.
struct ExtensionClass {
    int p = 2;
    int m = 0;
    int n = 0;
    std::vector<ClassComponent> comps;

    ExtensionClass() = default;
    ExtensionClass(int prime, int m_, std::vector<ClassComponent> components);

    static ExtensionClass zero(int prime, int m_, int n_);

    bool is_zero() const;
    bool operator==(const ExtensionClass& o) const { return key() == o.key(); }
    bool operator!=(const ExtensionClass& o) const { return !(*this == o); }

    // Canonical byte encoding; injective per (p, m, n).
    std::string key() const;

    // Dimension of one component's coefficient vector.
    std::size_t coeff_dim() const;
    // Flatten component j into out[0..coeff_dim).
    void coeff_column(int j, std::uint8_t* out) const;
    // Rebuild component j from a coefficient vector.
    void set_from_coeffs(int j, const std::uint8_t* in);

    nlohmann::json to_json() const;
    static ExtensionClass from_json(const nlohmann::json& j);
};

// Composition with M on the source: each component X_i(M x).
ExtensionClass substitute(const ExtensionClass& e, const FpMatrix& M);

// Left action of s in GL_m: (s · e)_i = X_i(s^{-1} x).
ExtensionClass act_v(const FpMatrix& s, const ExtensionClass& e);

// Action of t in GL_n mixing components: with u = t^{-1},
// (t · e)_j = sum_i u_ij X_i.
ExtensionClass act_n(const FpMatrix& t, const ExtensionClass& e);

// Combined action (s, t) · e = act_n(t, act_v(s, e)).
ExtensionClass pair_act(const FpMatrix& s, const FpMatrix& t, const ExtensionClass& e);

// Component mixing by an explicit coefficient matrix u (column j gives the
// coefficients of the new component j); no inversion applied.
ExtensionClass mix_components(const ExtensionClass& e, const FpMatrix& u);

// --- text grammar -----------------------------------------------------------
//
// p = 2 classes parse from ';'-separated form expressions:
//   form  := '0' | term ('+' term)*
//   term  := var '^2' | var '*' var | var var | var
// with x, y, z usable for m <= 3 and x1, x2, ... in general.  Odd-p classes
// parse from (and print to) the JSON encoding instead.

QuadraticFormF2 parse_form(const std::string& text, int m);
ExtensionClass parse_class(const std::string& text, int p, int m, int n);
std::string print_class(const ExtensionClass& e);

}  // namespace extorb
