#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "extorb/fp.hpp"

namespace extorb {

// ---------------------------------------------------------------------------
// Quadratic forms over F_2 in m variables, stored as the upper-triangular
// coefficient table c[i][j] (i <= j) of sum c_ij x_i x_j.  Variables are
// 0-indexed internally, 1-indexed in text/JSON.
// ---------------------------------------------------------------------------

struct QuadraticFormF2 {
    int m = 0;
    std::vector<std::uint8_t> c;  // length m(m+1)/2, row-major over pairs i <= j

    QuadraticFormF2() = default;
    explicit QuadraticFormF2(int vars);

    static std::size_t table_size(int m) {
        return static_cast<std::size_t>(m) * (m + 1) / 2;
    }
    std::size_t idx(int i, int j) const {  // requires i <= j
        return static_cast<std::size_t>(i) * (2 * m - i - 1) / 2 + j;
    }
    std::uint8_t coeff(int i, int j) const {
        if (i > j) std::swap(i, j);
        return c[idx(i, j)];
    }
    void add_term(int i, int j, int v = 1);  // accumulates mod 2

    bool is_zero() const;
    // Evaluate at the vector with bit i = coefficient of x_i.
    int eval_mask(std::uint32_t v) const;
    int eval(const std::vector<std::uint8_t>& v) const;

    // Composition q(M x): the form in the substituted variables.
    QuadraticFormF2 substituted(const FpMatrix& M) const;

    bool operator==(const QuadraticFormF2& o) const { return m == o.m && c == o.c; }
    bool operator!=(const QuadraticFormF2& o) const { return !(*this == o); }
    bool lex_less(const QuadraticFormF2& o) const {
        return std::lexicographical_compare(c.begin(), c.end(), o.c.begin(), o.c.end());
    }

    std::string to_text() const;  // canonical; "0" for the zero form
    nlohmann::json to_json() const;
    static QuadraticFormF2 from_json(const nlohmann::json& j);
};

// Polarization B(x, y) = Q(x+y) + Q(x) + Q(y) as a symmetric m x m matrix
// with zero diagonal (alternating over F_2).
FpMatrix bilinear_of(const QuadraticFormF2& q);

Subspace bilrad(const QuadraticFormF2& q);  // radical of the polarization
Subspace rad(const QuadraticFormF2& q);     // {v in bilrad : Q(v) = 0}

// Majority-count invariant: +1 when Q has more zeros than ones, -1 when more
// ones, 0 on a tie.  Exhaustive over 2^m vectors; m <= 24.
int arf_democratic(const QuadraticFormF2& q);

// Classical invariant sum Q(u_i) Q(v_i) over a symplectic basis of the
// polarization; requires the polarization nondegenerate (DegenerateForm).
// Returns +1 / -1.  `seed` randomizes the basis construction; 0 = greedy
// deterministic choice.
int arf_symplectic(const QuadraticFormF2& q, std::uint64_t seed = 0);

// Complete invariant for GL_m(F_2)-equivalence.
struct FormTriple {
    int dim = 0;         // ambient variable count m
    int bilrad_dim = 0;  // dim of the polarization radical
    int arf = 0;         // democratic invariant: +1 / -1 / 0
    bool operator==(const FormTriple& o) const {
        return dim == o.dim && bilrad_dim == o.bilrad_dim && arf == o.arf;
    }
};

FormTriple classify(const QuadraticFormF2& q);

enum class StandardKind {
    Plus,   // x1 x2 + ... + x_{m-1} x_m           (m even)
    Minus,  // hyperbolic + x_{m-1}^2 + x_{m-1} x_m + x_m^2  (m even)
    Odd,    // x1^2 + x2 x3 + ... + x_{m-1} x_m    (m odd)
    Zero,
};

// The standard form of the given kind on `vars` variables, padded with unused
// trailing variables up to `m` ambient variables.
QuadraticFormF2 standard_form(StandardKind kind, int vars, int m);

// The padded standard representative of q's equivalence class, with a label
// such as "Φ₄⁺ (plus standard)".
struct StandardClass {
    StandardKind kind = StandardKind::Zero;
    int vars = 0;  // variables actually used by the representative
    QuadraticFormF2 rep;
    std::string label;
};

StandardClass standard_class_of(const QuadraticFormF2& q);

// s acting on q by (s·q)(v) = q(s^{-1} v).
QuadraticFormF2 change_basis(const QuadraticFormF2& q, const FpMatrix& s);

// Equivalence test via the classifying triple; optionally produce a witness s
// with s·q1 = q2 by exhausting GL_m (m <= 4, else WitnessSearchCapExceeded).
bool equivalent(const QuadraticFormF2& q1, const QuadraticFormF2& q2);
std::optional<FpMatrix> equivalence_witness(const QuadraticFormF2& q1,
                                            const QuadraticFormF2& q2);

// Constructive reduction: (s, standard) with s·q = standard.  ZeroForm on 0.
std::pair<FpMatrix, QuadraticFormF2> reduce_to_standard(const QuadraticFormF2& q);

// Block sum on disjoint variables, and the invariant comparison used to
// document that the majority-count invariant is not additive.
QuadraticFormF2 direct_sum(const QuadraticFormF2& q1, const QuadraticFormF2& q2);
struct ArfSumCheck {
    int arf1 = 0, arf2 = 0, arf_sum = 0;
};
ArfSumCheck arf_direct_sum_check(const QuadraticFormF2& q1, const QuadraticFormF2& q2);

// ---------------------------------------------------------------------------
// Odd-p class components: an alternating 2-form plus a 1-form (the square /
// commutator data of a class with p odd).  Coefficients: alt[i][j] for i < j
// of sum a_ij x_i ^ x_j, bock[i] of the 1-form.
// ---------------------------------------------------------------------------

struct AltBock {
    int p = 3;
    int m = 0;
    std::vector<std::uint8_t> alt;   // length m(m-1)/2, pairs i < j row-major
    std::vector<std::uint8_t> bock;  // length m

    AltBock() = default;
    AltBock(int prime, int vars);

    std::size_t aidx(int i, int j) const {  // requires i < j
        return static_cast<std::size_t>(i) * (2 * m - i - 1) / 2 + (j - i - 1);
    }
    int alt_coeff(int i, int j) const;  // antisymmetric lookup
    void add_alt(int i, int j, int v);
    void add_bock(int i, int v);

    bool is_zero() const;
    FpMatrix alt_matrix() const;  // full antisymmetric m x m matrix

    // Substitution x -> M x: alt' = M^T alt M, bock' = M^T bock.
    AltBock substituted(const FpMatrix& M) const;

    bool operator==(const AltBock& o) const {
        return p == o.p && m == o.m && alt == o.alt && bock == o.bock;
    }

    nlohmann::json to_json() const;
    static AltBock from_json(const nlohmann::json& j);
};

// Coefficient-vector views used by the orbit engine: a component of either
// kind flattens to a vector of dimension coeff_dim.
std::size_t quad_coeff_dim(int m);
std::size_t altbock_coeff_dim(int m);

}  // namespace extorb
