#include <cctype>
#include <string>

#include "extorb/extension_class.hpp"

namespace extorb {

namespace {

struct FormParser {
    const std::string& text;
    std::size_t pos;    // cursor into `text`
    std::size_t limit;  // one past the segment end
    int m;

    void skip_ws() {
        while (pos < limit && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& what) { throw FormSyntaxError(what, pos); }

    bool at_var() {
        if (pos >= limit) return false;
        char c = text[pos];
        return c == 'x' || c == 'y' || c == 'z';
    }

    int parse_var() {
        if (!at_var()) fail("expected a variable");
        char c = text[pos];
        if (c == 'x' && pos + 1 < limit && std::isdigit(static_cast<unsigned char>(text[pos + 1]))) {
            std::size_t start = pos + 1;
            std::size_t end = start;
            while (end < limit && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
            int idx = std::stoi(text.substr(start, end - start));
            if (idx < 1 || idx > m) fail("variable index out of range for m=" + std::to_string(m));
            pos = end;
            return idx - 1;
        }
        if (m > 3) fail("single-letter variables need m <= 3");
        int idx = c - 'x';
        if (idx >= m) fail("variable out of range for m=" + std::to_string(m));
        ++pos;
        return idx;
    }

    QuadraticFormF2 parse() {
        QuadraticFormF2 q(m);
        skip_ws();
        if (pos < limit && text[pos] == '0') {
            ++pos;
            skip_ws();
            if (pos != limit) fail("unexpected input after zero form");
            return q;
        }
        if (pos == limit) fail("expected a form expression");
        while (true) {
            int i = parse_var();
            int j = i;
            if (pos < limit && text[pos] == '^') {
                ++pos;
                if (pos >= limit || text[pos] != '2') fail("expected '2' after '^'");
                ++pos;
            } else if (pos < limit && text[pos] == '*') {
                ++pos;
                skip_ws();
                j = parse_var();
            } else if (at_var()) {
                j = parse_var();
            }
            q.add_term(i, j);
            skip_ws();
            if (pos == limit) break;
            if (text[pos] != '+') fail("expected '+' between terms");
            ++pos;
            skip_ws();
        }
        return q;
    }
};

}  // namespace

QuadraticFormF2 parse_form(const std::string& text, int m) {
    if (m < 1) throw DimensionMismatch("parse_form: m must be >= 1");
    FormParser parser{text, 0, text.size(), m};
    return parser.parse();
}

ExtensionClass parse_class(const std::string& text, int p, int m, int n) {
    check_prime(p);
    if (n < 1) throw FormSyntaxError("a class needs at least one component (n >= 1)", 0);
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        ExtensionClass e = ExtensionClass::from_json(nlohmann::json::parse(text));
        if (e.p != p || e.m != m || e.n != n)
            throw DimensionMismatch("class JSON does not match the requested (p, m, n)");
        return e;
    }
    if (p != 2)
        throw FormSyntaxError("odd-p classes are given in JSON form", 0);
    std::vector<ClassComponent> comps;
    std::size_t start = 0;
    while (true) {
        std::size_t sep = text.find(';', start);
        std::size_t end = (sep == std::string::npos) ? text.size() : sep;
        FormParser parser{text, start, end, m};
        comps.emplace_back(parser.parse());
        if (sep == std::string::npos) break;
        start = sep + 1;
    }
    if (static_cast<int>(comps.size()) != n)
        throw FormSyntaxError("class has " + std::to_string(comps.size()) +
                                  " component(s) but n=" + std::to_string(n),
                              text.size());
    return ExtensionClass(p, m, std::move(comps));
}

std::string print_class(const ExtensionClass& e) {
    if (e.p != 2) return e.to_json().dump();
    std::string out;
    for (int j = 0; j < e.n; ++j) {
        if (j) out += "; ";
        out += std::get<QuadraticFormF2>(e.comps[static_cast<std::size_t>(j)]).to_text();
    }
    return out;
}

}  // namespace extorb
