#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "extorb/extension_class.hpp"
#include "extorb/twisting.hpp"

namespace extorb {

// A named, ready-made class with the values its construction is expected to
// produce (orders as decimal strings, labels as text).  The expected map is
// the golden data driven by the test suite and the reproduce runners.
struct CatalogEntry {
    std::string name;
    ExtensionClass cls;
    std::map<std::string, std::string> expected;
    std::string provenance;
    std::string notes;

    nlohmann::json to_json() const;
};

// Central quotient class of the extraspecial group of order p^{2n+1} and
// exponent p (p odd): a single nondegenerate alternating component over a
// rank-2n source.
CatalogEntry extraspecial_class(int n, int p);

// Universal W-group class: all square and product monomials in n variables
// over F_2, in coefficient order.
CatalogEntry w_group_class(int n);

// Rank-3 source, components (xy, yz).
CatalogEntry u4_class();

// Rank-4 source, components (x1x2, x2x3, x3x4).
CatalogEntry u5_class();

// Odd-p class over a rank-2 source with three target coordinates.  The
// printed variant carries only the alternating component (x ^ y) in the third
// coordinate; the with_bockstein variant adds the one-form components e_x,
// e_y in the first two coordinates, which the order-p^2 generators force.
enum class Example43Variant { Printed, WithBockstein };
CatalogEntry example_4_3_class(int p, Example43Variant variant);

// Rank-2 source, single alternating component (x ^ y), odd p.
CatalogEntry application_4_e2_class(int p);

// The nontrivial action on a rank-2 target: the first generator acts by the
// transvection c -> c + d, d -> d; the second acts trivially.
TwistingMap application_4_twisting(int p);

// The 27 two-component classes (x^2 + yz, Y) whose image orders split 2/3/4.
std::vector<CatalogEntry> table_5_2_2();

// Every named entry, table rows included.
std::vector<CatalogEntry> catalog_all();

// Lookup by name; std::nullopt when absent.
std::optional<CatalogEntry> catalog_get(const std::string& name);

}  // namespace extorb
