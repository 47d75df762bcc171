#ifndef LORENTZ_JSON_IO_HPP
#define LORENTZ_JSON_IO_HPP

#include <optional>
#include <string>

#include "json.hpp"

#include "lorentz/approx.hpp"
#include "lorentz/geometry.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/sequence.hpp"
#include "lorentz/weights.hpp"

namespace lorentz {

using json = nlohmann::json;

/// Thrown for malformed input documents.
struct JsonError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Integers are written as JSON integers, other rationals as {"num", "den"}
/// (strings when they exceed 64 bits), floats as JSON floats and infinities
/// as the string "inf".
json to_json(const Scalar &s);
/// Accepts integers and {"num", "den"} (exact), floats (float mode) and
/// "inf" / "-inf". Integers too large for 64 bits may be strings.
Scalar scalar_from_json(const json &j);

/// {"head": [...], "tail": {"kind": "zero" | "constant" | "geometric", ...}}
json to_json(const Sequence &x);
Sequence sequence_from_json(const json &j);

/// {"head": [...], "tail": {"kind": "zero" | "powerlaw" | "geometric", ...}, "p": ...}
json to_json(const WeightSpec &w);
/// `p` overrides the document's exponent (default 1 when absent).
WeightSpec weights_from_json(const json &j, std::optional<double> p = std::nullopt);

json to_json(const CertifiedValue &v);
json to_json(const SupResult &s);
json to_json(const RegimeReport &r);
json to_json(const Verdict &v);
json to_json(const CounterexampleBundle &b);
json to_json(const ProjectionResult &r);
json to_json(const ExistenceReport &r);
json to_json(const NormingElement &e);

Vector vector_from_json(const json &j);
json to_json(const Vector &v);
Matrix matrix_from_json(const json &j);
json matrix_to_json(const Matrix &m);

/// Parses `text` as JSON when it looks like a document, otherwise reads the
/// file it names.
json load_json_argument(const std::string &text);

} // namespace lorentz

#endif // LORENTZ_JSON_IO_HPP
