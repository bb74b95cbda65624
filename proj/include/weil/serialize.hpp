#pragma once

#include "weil/jordan.hpp"
#include "weil/weilrep.hpp"

#include <json.hpp>

#include <string>

namespace weil {

using Json = nlohmann::json;

// {"order", "coeffs": rational strings, "text"} plus "numeric" when precision_bits > 0
Json scalar_to_json(const ExactScalar& x, unsigned precision_bits = 0);
ExactScalar scalar_from_json(const Json& j);

Json operator_to_json(const WeilOperator& m, unsigned precision_bits = 0);
WeilOperator operator_from_json(const Json& j);

Json form_to_json(const DiscriminantForm& D);
Json jordan_to_json(const JordanDecomposition& jd);
// e.g. "1^+1_1 2^-2_II"
std::string jordan_symbol(const JordanDecomposition& jd);

// Accepts {"gram": [[..]]} or a bare [[..]]; entries must be integers.
GramLattice lattice_from_json(const Json& j);
// inline JSON text, or the path of a file holding it
GramLattice parse_lattice(const std::string& text_or_path);

}  // namespace weil
