#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vallearn/valuation.hpp"

namespace vallearn {

// Counterexample found by one of the exhaustive checkers.  `sets` and
// `values` carry the witness in the layout described per check below.
struct Violation {
    std::string check;
    std::vector<ItemSet> sets;
    std::vector<double> values;
    std::string message;
};

// Every checker enumerates subsets in mask order and returns the first
// counterexample, or nullopt when the condition holds everywhere.  Slack
// of 1e-9 absorbs float noise in evaluated values.

// f(S) <= f(S ∪ {i}).  Witness: sets = {S, S ∪ {i}}, values = both f's.
// Requires n <= 16.
std::optional<Violation> check_monotone(const Valuation& v);

// f(S ∪ T) <= f(S) + f(T) for all pairs.  Witness: sets = {S, T},
// values = {f(S∪T), f(S), f(T)}.  Requires n <= 14.
std::optional<Violation> check_subadditive(const Valuation& v);

// f(S∪{i,j}) - f(S∪{i}) <= f(S∪{j}) - f(S).  Witness: sets = {S} plus the
// two items encoded in the message, values = the four f's.  Requires
// n <= 14.
std::optional<Violation> check_submodular(const Valuation& v);

// Triple condition: for marginals taken at S over distinct outside items
// a,b,c, the pairing value f^S(ab) + f^S(c) must not strictly exceed both
// f^S(ac) + f^S(b) and f^S(bc) + f^S(a) (and symmetrically).  Witness:
// sets = {S, {a,b,c}}, values = the six marginals in the order
// f^S(a), f^S(b), f^S(c), f^S(ab), f^S(ac), f^S(bc).  Requires n <= 12.
std::optional<Violation> check_gs_triples(const Valuation& v);

// For an Xos valuation, f(T) must equal the LP maximum of sum x_i over T
// subject to x >= 0 and sum_{i in S} x_i <= f(S) for every S, within 1e-6.
// Witness: sets = {T}, values = {lp optimum, f(T)}.  Requires n <= 6.
std::optional<Violation> check_xos_polyhedron(const Valuation& v);

}  // namespace vallearn
