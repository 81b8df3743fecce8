#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "extorb/orbit.hpp"

namespace extorb {

// One expected-vs-computed comparison inside a reproduce run.
struct ReproduceCheck {
    std::string what;
    std::string expected;
    std::string computed;
    bool ok = false;
};

struct ReproduceResult {
    std::string target;
    std::vector<ReproduceCheck> checks;

    bool ok() const;
    std::size_t matched() const;
    nlohmann::json to_json() const;
};

// Valid targets, in display order.
const std::vector<std::string>& reproduce_targets();

// Run the golden suite for one target.  Throws on an unknown target; caps
// bound all enumeration inside.
ReproduceResult reproduce(const std::string& target, const Caps& caps = Caps{});

}  // namespace extorb
