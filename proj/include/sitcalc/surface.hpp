#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sitcalc/bat.hpp"
#include "sitcalc/formula.hpp"

namespace sitcalc {

class ParseError : public std::runtime_error {
public:
    ParseError(SourceSpan span, const std::string& msg)
        : std::runtime_error(span.str() + ": " + msg), span_(std::move(span)) {}
    const SourceSpan& span() const { return span_; }

private:
    SourceSpan span_;
};

BasicActionTheory parse_bat(std::string_view text, const std::string& file = "<input>");
BasicActionTheory load_bat(const std::string& path);

struct FormulaScope {
    std::set<std::string> object_vars;  // allowed free object variables
    std::set<std::string> action_vars;
    bool allow_stages = true;           // accept @now / @next suffixes
};

// Formula over the declared symbols of `sig`; undeclared identifiers are errors.
Formula parse_formula(std::string_view text, const Signature& sig, const FormulaScope& scope = {});
GroundAction parse_action(std::string_view text, const Signature& sig);
GroundAtom parse_atom(std::string_view text, const Signature& sig);
// Semicolon-separated list of ground actions.
std::vector<GroundAction> parse_actions(std::string_view text, const Signature& sig);

std::string render(const Term& t);
std::string render(const Formula& f);
std::string render(const Theory& t);  // one axiom per line, `;`-terminated
std::string render(const GroundAtom& a);
std::string render(const GroundAction& a);
std::string render(const BasicActionTheory& b);
// Declarations and an init block only.
std::string render_theory_file(const Signature& sig, const Theory& t);

}  // namespace sitcalc
