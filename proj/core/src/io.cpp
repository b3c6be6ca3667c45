#include "triplekit/io.hpp"

#include <json.hpp>

namespace triplekit {

using nlohmann::json;

namespace {

json rational_json(const Rational& r) { return r.str(); }

Rational rational_from(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return Rational::from_string(j.get<std::string>());
  throw std::invalid_argument("json: expected rational as string or integer");
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rational_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from(const json& j) {
  std::size_t rows = j.size();
  std::size_t cols = rows == 0 ? 0 : j.at(0).size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = rational_from(j.at(i).at(c));
  return m;
}

std::vector<Rational> rational_list_from(const json& j) {
  std::vector<Rational> out;
  for (const auto& v : j) out.push_back(rational_from(v));
  return out;
}

json rational_list_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(rational_json(r));
  return out;
}

json triple_json(const SymmetricTriple& t) {
  json j;
  j["dim"] = t.dim_g();
  j["labels"] = t.algebra().labels();
  json brackets = json::array();
  for (std::size_t i = 0; i < t.dim_g(); ++i)
    for (std::size_t k = i + 1; k < t.dim_g(); ++k) {
      const Vector& c = t.algebra().bracket_basis(i, k);
      if (is_zero_vector(c)) continue;
      json coeffs = json::object();
      for (std::size_t l = 0; l < c.size(); ++l)
        if (!c[l].is_zero()) coeffs[std::to_string(l)] = rational_json(c[l]);
      brackets.push_back({{"i", i}, {"j", k}, {"coeffs", std::move(coeffs)}});
    }
  j["brackets"] = std::move(brackets);
  j["gram"] = matrix_json(t.form().gram());
  j["h_indices"] = t.h_indices();
  j["m_indices"] = t.m_indices();
  return j;
}

SymmetricTriple triple_from(const json& j) {
  std::size_t dim = j.at("dim").get<std::size_t>();
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  std::vector<BracketEntry> entries;
  for (const auto& b : j.at("brackets")) {
    BracketEntry e;
    e.i = b.at("i").get<std::size_t>();
    e.j = b.at("j").get<std::size_t>();
    e.coeffs = Vector(dim, Rational(0));
    for (const auto& [key, val] : b.at("coeffs").items())
      e.coeffs[static_cast<std::size_t>(std::stoul(key))] = rational_from(val);
    entries.push_back(std::move(e));
  }
  LieAlgebra alg(dim, entries, labels);
  Matrix gram = matrix_from(j.at("gram"));
  std::vector<std::size_t> h = j.at("h_indices").get<std::vector<std::size_t>>();
  std::vector<std::size_t> m = j.at("m_indices").get<std::vector<std::size_t>>();
  return SymmetricTriple(MetricLieAlgebra(std::move(alg), BilinearForm(std::move(gram))), h, m);
}

json params_json(const FamilyParams& params) {
  json j;
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LorentzParams>) {
          j["family"] = "lorentz";
          j["params"]["f"] = rational_list_json(p.f);
        } else if constexpr (std::is_same_v<T, IaParams>) {
          j["family"] = "Ia";
          j["params"] = {{"eps_y", p.eps_y},
                         {"r", p.r},
                         {"lambda1", rational_list_json(p.l1)},
                         {"lambda2", rational_list_json(p.l2)}};
        } else if constexpr (std::is_same_v<T, IbParams>) {
          j["family"] = "Ib";
          j["params"] = {{"r", p.r},
                         {"lambda1", rational_list_json(p.l1)},
                         {"lambda2", rational_list_json(p.l2)}};
        } else if constexpr (std::is_same_v<T, IIaParams>) {
          j["family"] = "IIa";
          j["params"] = {{"r", p.r},
                         {"lambda1", rational_list_json(p.l1)},
                         {"lambda2", rational_list_json(p.l2)}};
        } else if constexpr (std::is_same_v<T, IIbParams>) {
          j["family"] = "IIb";
          j["params"] = {{"r", p.r},
                         {"lambda1", rational_list_json(p.l1)},
                         {"lambda2", rational_list_json(p.l2)}};
        } else if constexpr (std::is_same_v<T, Nil22Params>) {
          j["family"] = "nil22";
          j["params"] = {{"eps_y", p.eps_y}};
        } else if constexpr (std::is_same_v<T, Nil23Params>) {
          j["family"] = "nil23";
          j["params"] = json::object();
        } else if constexpr (std::is_same_v<T, Nil24Params>) {
          j["family"] = "nil24";
          j["params"] = json::object();
        } else if constexpr (std::is_same_v<T, IIIParams>) {
          j["family"] = "III";
          std::string kind;
          switch (p.block.kind) {
            case IIIBlock::Kind::None: kind = "none"; break;
            case IIIBlock::Kind::DiagEqual: kind = "diag"; break;
            case IIIBlock::Kind::JordanPlus: kind = "jordan+"; break;
            case IIIBlock::Kind::JordanMinus: kind = "jordan-"; break;
            case IIIBlock::Kind::Rotation: kind = "rotation"; break;
          }
          j["params"] = {{"block", kind},
                         {"phi1", rational_json(p.block.phi1)},
                         {"phi2", rational_json(p.block.phi2)},
                         {"f", rational_list_json(p.f)}};
        } else if constexpr (std::is_same_v<T, IVParams>) {
          j["family"] = "IV";
          j["params"] = {{"a", rational_json(p.a)},
                         {"b", rational_json(p.b)},
                         {"f", rational_list_json(p.f)}};
        } else if constexpr (std::is_same_v<T, LeastNilpotentParams>) {
          j["family"] = "least-nilpotent";
          json lam = json::array();
          for (const auto& v : p.lambda) lam.push_back(rational_list_json(v));
          j["params"] = {{"p", p.p},
                         {"b", rational_list_json(p.b)},
                         {"epsilon", p.epsilon},
                         {"lambda", lam}};
        }
      },
      params);
  return j;
}

std::optional<FamilyParams> params_from(const json& j) {
  if (!j.contains("family") || !j.contains("params")) return std::nullopt;
  std::string fam = j.at("family").get<std::string>();
  const json& p = j.at("params");
  if (fam == "lorentz") return LorentzParams{rational_list_from(p.at("f"))};
  if (fam == "Ia")
    return IaParams{p.at("eps_y").get<int>(), p.at("r").get<std::size_t>(),
                    rational_list_from(p.at("lambda1")), rational_list_from(p.at("lambda2"))};
  if (fam == "Ib")
    return IbParams{p.at("r").get<std::size_t>(), rational_list_from(p.at("lambda1")),
                    rational_list_from(p.at("lambda2"))};
  if (fam == "IIa")
    return IIaParams{p.at("r").get<std::size_t>(), rational_list_from(p.at("lambda1")),
                     rational_list_from(p.at("lambda2"))};
  if (fam == "IIb")
    return IIbParams{p.at("r").get<std::size_t>(), rational_list_from(p.at("lambda1")),
                     rational_list_from(p.at("lambda2"))};
  if (fam == "nil22") return Nil22Params{p.at("eps_y").get<int>()};
  if (fam == "nil23") return Nil23Params{};
  if (fam == "nil24") return Nil24Params{};
  if (fam == "III") {
    IIIParams out;
    std::string kind = p.at("block").get<std::string>();
    if (kind == "none")
      out.block.kind = IIIBlock::Kind::None;
    else if (kind == "diag")
      out.block.kind = IIIBlock::Kind::DiagEqual;
    else if (kind == "jordan+")
      out.block.kind = IIIBlock::Kind::JordanPlus;
    else if (kind == "jordan-")
      out.block.kind = IIIBlock::Kind::JordanMinus;
    else if (kind == "rotation")
      out.block.kind = IIIBlock::Kind::Rotation;
    else
      throw std::invalid_argument("json: unknown III block kind '" + kind + "'");
    if (p.contains("phi1")) out.block.phi1 = rational_from(p.at("phi1"));
    if (p.contains("phi2")) out.block.phi2 = rational_from(p.at("phi2"));
    out.f = rational_list_from(p.at("f"));
    return out;
  }
  if (fam == "IV")
    return IVParams{rational_from(p.at("a")), rational_from(p.at("b")),
                    rational_list_from(p.at("f"))};
  if (fam == "least-nilpotent") {
    LeastNilpotentParams out;
    out.p = p.at("p").get<std::size_t>();
    out.b = rational_list_from(p.at("b"));
    out.epsilon = p.at("epsilon").get<std::vector<int>>();
    for (const auto& v : p.at("lambda")) out.lambda.push_back(rational_list_from(v));
    return out;
  }
  throw std::invalid_argument("json: unknown family '" + fam + "'");
}

}  // namespace

std::string triple_to_json_string(const SymmetricTriple& t, int indent) {
  return triple_json(t).dump(indent);
}

SymmetricTriple triple_from_json_string(const std::string& text) {
  return triple_from(json::parse(text));
}

std::string family_params_to_json_string(const FamilyParams& params, int indent) {
  return params_json(params).dump(indent);
}

std::optional<FamilyParams> family_params_from_json_string(const std::string& text) {
  return params_from(json::parse(text));
}

std::string certificate_to_json_string(const IsomorphismCertificate& cert, int indent) {
  json j;
  j["permutation"] = cert.permutation;
  j["signs"] = cert.signs;
  j["z_change"] = matrix_json(cert.z_change);
  j["radicand"] = rational_json(cert.radicand);
  j["witness_rational_part"] = matrix_json(cert.witness_rat);
  if (!cert.witness_irr.is_zero()) j["witness_sqrt_part"] = matrix_json(cert.witness_irr);
  return j.dump(indent);
}

std::string report_to_json_string(const TripleReport& rep, int indent) {
  json j;
  j["grading"] = rep.grading_ok;
  j["jacobi"] = rep.jacobi_ok;
  j["h_is_mm"] = rep.h_is_mm;
  j["sigma_invariant"] = rep.sigma_invariant;
  j["ad_invariant"] = rep.ad_invariant;
  j["b_m_nondegenerate"] = rep.b_m_nondegenerate;
  j["b_h_nondegenerate"] = rep.b_h_nondegenerate;
  j["faithful"] = rep.faithful;
  j["signature"] = {rep.m_signature.neg, rep.m_signature.pos, rep.m_signature.null};
  j["pass"] = rep.pass();
  return j.dump(indent);
}

std::string annotated_triple_json(const SymmetricTriple& t, const FamilyParams& params,
                                  int indent) {
  json j = triple_json(t);
  json fam = params_json(params);
  j["family"] = fam["family"];
  j["params"] = fam["params"];
  return j.dump(indent);
}

}  // namespace triplekit
