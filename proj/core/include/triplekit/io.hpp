#ifndef TRIPLEKIT_IO_HPP
#define TRIPLEKIT_IO_HPP

#include <string>

#include "triplekit/classify.hpp"
#include "triplekit/oracle.hpp"

namespace triplekit {

/// Triple <-> JSON with rationals serialized as "p/q" strings, matrices as
/// row-major arrays, brackets listed for i < j only. When the triple comes
/// from a normal-form constructor the family tag and parameters ride along.
std::string triple_to_json_string(const SymmetricTriple& t, int indent = 2);
SymmetricTriple triple_from_json_string(const std::string& text);

/// Family parameter payloads, e.g. {"family":"lorentz","params":{"f":["1","2"]}}.
std::string family_params_to_json_string(const FamilyParams& params, int indent = 2);
std::optional<FamilyParams> family_params_from_json_string(const std::string& text);

std::string certificate_to_json_string(const IsomorphismCertificate& cert, int indent = 2);

std::string report_to_json_string(const TripleReport& rep, int indent = 2);

/// Serialized triple with the optional family annotation attached.
std::string annotated_triple_json(const SymmetricTriple& t, const FamilyParams& params,
                                  int indent = 2);

}  // namespace triplekit

#endif
