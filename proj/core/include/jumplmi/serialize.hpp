#pragma once

#include <nlohmann/json.hpp>

#include "jumplmi/certificates.hpp"
#include "jumplmi/lmi.hpp"
#include "jumplmi/rate_search.hpp"
#include "jumplmi/simulation.hpp"

namespace jumplmi {

using nlohmann::json;

void to_json(json& j, const StructuredP& P);
void from_json(const json& j, StructuredP& P);
void to_json(json& j, const MultiplierPair& m);
void from_json(const json& j, MultiplierPair& m);
void to_json(json& j, const RateCertificate& c);
void from_json(const json& j, RateCertificate& c);
void to_json(json& j, const BundleReport& r);
void to_json(json& j, const VerificationReport& r);
void to_json(json& j, const LmiBundle& b);
void to_json(json& j, const Witness& w);
void to_json(json& j, const RestartDiagnostic& d);
void to_json(json& j, const SearchResult& r);
void to_json(json& j, const SagProbeResult& r);
void to_json(json& j, const ContractionReport& r);
void to_json(json& j, const EmpiricalRate& r);
// Summary only; the per-iteration columns go to CSV.
void to_json(json& j, const SimulationTrace& t);

json symmatrix_to_json(const SymMatrix& m);

}  // namespace jumplmi
