#include "lorentz/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace lorentz {

namespace {

json integer_json(const mpz_class &z) {
  if (z.fits_slong_p())
    return json(z.get_si());
  return json(z.get_str());
}

mpz_class integer_from_json(const json &j) {
  if (j.is_number_integer())
    return mpz_class(static_cast<long>(j.get<long long>()));
  if (j.is_number_unsigned())
    return mpz_class(std::to_string(j.get<unsigned long long>()));
  if (j.is_string()) {
    try {
      return mpz_class(j.get<std::string>());
    } catch (const std::invalid_argument &) {
    }
  }
  throw JsonError("expected an integer, got " + j.dump());
}

const json &field(const json &j, const char *key) {
  if (!j.is_object() || !j.contains(key))
    throw JsonError(std::string("missing field \"") + key + "\" in " + j.dump());
  return j.at(key);
}

std::vector<Scalar> scalars(const json &j) {
  if (!j.is_array())
    throw JsonError("expected an array, got " + j.dump());
  std::vector<Scalar> out;
  for (const auto &e : j)
    out.push_back(scalar_from_json(e));
  return out;
}

json scalars_json(const std::vector<Scalar> &v) {
  json out = json::array();
  for (const auto &s : v)
    out.push_back(to_json(s));
  return out;
}

std::string tail_kind(const json &j) {
  const json &k = field(j, "kind");
  if (!k.is_string())
    throw JsonError("tail kind must be a string");
  return k.get<std::string>();
}

} // namespace

json to_json(const Scalar &s) {
  if (s.is_exact()) {
    const Rational &q = s.rational();
    if (q.get_den() == 1)
      return integer_json(q.get_num());
    return json{{"num", integer_json(q.get_num())}, {"den", integer_json(q.get_den())}};
  }
  const double d = s.to_double();
  if (std::isinf(d))
    return d > 0 ? json("inf") : json("-inf");
  if (std::isnan(d))
    return json("nan");
  return json(d);
}

Scalar scalar_from_json(const json &j) {
  if (j.is_number_integer() || j.is_number_unsigned())
    return Scalar(Rational(integer_from_json(j)));
  if (j.is_number_float())
    return Scalar::from_double(j.get<double>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf")
      return Scalar::infinity();
    if (s == "-inf")
      return -Scalar::infinity();
    return Scalar(Rational(integer_from_json(j)));
  }
  if (j.is_object() && j.contains("num") && j.contains("den")) {
    const mpz_class den = integer_from_json(j.at("den"));
    if (den == 0)
      throw JsonError("zero denominator in " + j.dump());
    return Scalar(Rational(integer_from_json(j.at("num")), den));
  }
  throw JsonError("expected a number, got " + j.dump());
}

json to_json(const Sequence &x) {
  json tail;
  std::visit(
      [&](const auto &t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ZeroTail>)
          tail = json{{"kind", "zero"}};
        else if constexpr (std::is_same_v<T, ConstantTail>)
          tail = json{{"kind", "constant"}, {"c", to_json(t.c)}};
        else
          tail = json{{"kind", "geometric"}, {"a", to_json(t.a)}, {"r", to_json(t.r)}};
      },
      x.tail());
  return json{{"head", scalars_json(x.head())}, {"tail", tail}};
}

Sequence sequence_from_json(const json &j) {
  if (j.is_array())
    return Sequence(scalars(j));
  std::vector<Scalar> head = scalars(field(j, "head"));
  if (!j.contains("tail"))
    return Sequence(std::move(head));
  const json &t = j.at("tail");
  const std::string kind = tail_kind(t);
  if (kind == "zero")
    return Sequence(std::move(head));
  if (kind == "constant")
    return Sequence(std::move(head), ConstantTail{scalar_from_json(field(t, "c"))});
  if (kind == "geometric")
    return Sequence(std::move(head), GeometricTail{scalar_from_json(field(t, "a")), scalar_from_json(field(t, "r"))});
  throw JsonError("unknown sequence tail kind: " + kind);
}

json to_json(const WeightSpec &w) {
  json tail;
  std::visit(
      [&](const auto &t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ZeroTail>)
          tail = json{{"kind", "zero"}};
        else if constexpr (std::is_same_v<T, PowerLawTail>)
          tail = json{{"kind", "powerlaw"}, {"c", to_json(t.c)}, {"alpha", t.alpha}};
        else
          tail = json{{"kind", "geometric"}, {"a", to_json(t.a)}, {"r", to_json(t.r)}};
      },
      w.tail());
  return json{{"head", scalars_json(w.head())}, {"tail", tail}, {"p", w.p()}};
}

WeightSpec weights_from_json(const json &j, std::optional<double> p) {
  std::vector<Scalar> head;
  WeightTail tail = ZeroTail{};
  double exponent = 1.0;
  if (j.is_array()) {
    head = scalars(j);
  } else {
    head = scalars(field(j, "head"));
    if (j.contains("p"))
      exponent = scalar_from_json(j.at("p")).to_double();
    if (j.contains("tail")) {
      const json &t = j.at("tail");
      const std::string kind = tail_kind(t);
      if (kind == "powerlaw")
        tail = PowerLawTail{scalar_from_json(field(t, "c")), scalar_from_json(field(t, "alpha")).to_double()};
      else if (kind == "geometric")
        tail = GeometricWeightTail{scalar_from_json(field(t, "a")), scalar_from_json(field(t, "r"))};
      else if (kind != "zero")
        throw JsonError("unknown weight tail kind: " + kind);
    }
  }
  return WeightSpec(std::move(head), tail, p.value_or(exponent));
}

json to_json(const CertifiedValue &v) { return json{{"value", to_json(v.value)}, {"error", v.error}}; }

json to_json(const SupResult &s) {
  json out{{"value", to_json(s.value.value)}, {"error", s.value.error}};
  out["attained_at"] = s.attained_at ? json(*s.attained_at) : json(nullptr);
  out["attaining"] = s.attaining;
  out["attained_on_tail"] = s.attained_on_tail;
  return out;
}

json to_json(const RegimeReport &r) {
  return json{{"W_infinite", r.W_infinite},
              {"order_continuous", r.order_continuous},
              {"strictly_monotone", r.strictly_monotone},
              {"strictly_convex", r.strictly_convex},
              {"fatou", r.fatou},
              {"dual_is_m_psi", r.dual_is_m_psi},
              {"predual_is_m_psi0", r.predual_is_m_psi0},
              {"all_weights_positive", r.all_weights_positive}};
}

json to_json(const Verdict &v) {
  json out{{"result", v.result}};
  json witness = json::object();
  if (v.index)
    witness["index"] = *v.index;
  if (!v.failed.empty())
    witness["failed"] = v.failed;
  if (v.pair)
    witness["pair"] = json::array({to_json(v.pair->first), to_json(v.pair->second)});
  if (v.gap)
    witness["gap"] = to_json(*v.gap);
  out["witness"] = witness;
  json conds = json::array();
  for (const auto &c : v.conditions)
    conds.push_back(json{{"name", c.name}, {"holds", c.holds}});
  out["conditions_checked"] = conds;
  return out;
}

json to_json(const CounterexampleBundle &b) {
  json seqs = json::object();
  for (const auto &[name, s] : b.sequences)
    seqs[name] = to_json(s);
  json checks = json::array();
  for (const auto &c : b.checks)
    checks.push_back(json{{"name", c.name},
                          {"lhs", to_json(c.lhs)},
                          {"rhs", to_json(c.rhs)},
                          {"holds", c.holds},
                          {"exact", c.exact}});
  return json{{"kind", to_string(b.kind)}, {"sequences", seqs}, {"checks", checks}, {"verified", b.verified}};
}

json to_json(const ProjectionResult &r) {
  json out{{"coefficients", r.coefficients}, {"distance", to_json(r.distance)}, {"iterations", r.iterations}};
  out["oracle_gap"] = r.oracle_gap ? json(*r.oracle_gap) : json(nullptr);
  return out;
}

json to_json(const ExistenceReport &r) {
  return json{{"samples", r.samples},
              {"attained", r.attained},
              {"max_oracle_gap", r.max_oracle_gap},
              {"best_norm", to_json(r.best_norm)},
              {"best_projection", matrix_to_json(r.best_projection)},
              {"certified_one", r.certified_one}};
}

json to_json(const NormingElement &e) {
  return json{{"x", to_json(e.x)}, {"index", e.index}, {"quotient", to_json(e.quotient)}};
}

Vector vector_from_json(const json &j) {
  if (j.is_object())
    return sequence_from_json(j).head();
  return scalars(j);
}

json to_json(const Vector &v) { return scalars_json(v); }

Matrix matrix_from_json(const json &j) {
  if (!j.is_array())
    throw JsonError("expected an array of rows");
  Matrix out;
  for (const auto &row : j)
    out.push_back(scalars(row));
  return out;
}

json matrix_to_json(const Matrix &m) {
  json out = json::array();
  for (const auto &row : m)
    out.push_back(scalars_json(row));
  return out;
}

json load_json_argument(const std::string &text) {
  std::size_t i = text.find_first_not_of(" \t\r\n");
  const bool inline_doc = i != std::string::npos && (text[i] == '{' || text[i] == '[');
  try {
    if (inline_doc)
      return json::parse(text);
    std::ifstream in(text);
    if (!in)
      throw JsonError("cannot read " + text);
    std::stringstream buf;
    buf << in.rdbuf();
    return json::parse(buf.str());
  } catch (const json::parse_error &e) {
    throw JsonError(std::string("malformed JSON: ") + e.what());
  }
}

} // namespace lorentz
