#include "jumplmi/serialize.hpp"

#include "jumplmi/error.hpp"

namespace jumplmi {

namespace {

std::string form_name(StructuredP::Form f) {
  return f == StructuredP::Form::PermutationInvariant ? "permutation_invariant" : "block_diagonal";
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json symmatrix_to_json(const SymMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

void to_json(json& j, const StructuredP& P) {
  j = json{{"method", to_string(P.method)}, {"form", form_name(P.form)}, {"p", P.p}};
}

void from_json(const json& j, StructuredP& P) {
  P.method = parse_method(j.at("method").get<std::string>());
  std::string form = j.value("form", std::string("block_diagonal"));
  if (form == "block_diagonal")
    P.form = StructuredP::Form::BlockDiagonal;
  else if (form == "permutation_invariant")
    P.form = StructuredP::Form::PermutationInvariant;
  else
    throw Error(ErrorCode::InvalidArgument, "unknown P form '" + form + "'");
  P.p = j.at("p").get<std::vector<double>>();
  std::size_t want = 2;
  if (P.method == MethodId::Finito)
    want = 5;
  else if (P.form == StructuredP::Form::PermutationInvariant)
    want = 4;
  if (P.p.size() != want) throw Error(ErrorCode::InvalidArgument, "P has the wrong number of parameters");
}

void to_json(json& j, const MultiplierPair& m) { j = json{{"lambda1", m.lambda1}, {"lambda2", m.lambda2}}; }

void from_json(const json& j, MultiplierPair& m) {
  m.lambda1 = j.at("lambda1").get<double>();
  m.lambda2 = j.at("lambda2").get<double>();
}

void to_json(json& j, const RateCertificate& c) {
  json weights = json::array();
  for (const auto& w : c.lyapunov_weights) weights.push_back({{"term", w.term}, {"weight", w.weight}});
  json alts = json::array();
  for (const auto& a : c.alternatives) alts.push_back(a);
  j = json{{"method", to_string(c.method)},
           {"assumption", to_string(c.assumption)},
           {"m", c.m},
           {"L", c.L},
           {"n", c.n},
           {"alpha", c.alpha},
           {"b", optional_number(c.b)},
           {"rho2", c.rho2},
           {"P", c.P},
           {"multipliers", c.mult},
           {"lyapunov_weights", weights},
           {"provenance", c.provenance},
           {"notes", c.notes},
           {"verified", c.verified},
           {"reference_rho2", optional_number(c.reference_rho2)},
           {"alternatives", alts}};
  auto k = iteration_complexity(c.rho2);
  j["iteration_complexity_1e-6"] = k ? json(*k) : json(nullptr);
}

void from_json(const json& j, RateCertificate& c) {
  c.method = parse_method(j.at("method").get<std::string>());
  c.assumption = parse_assumption(j.at("assumption").get<std::string>());
  c.m = j.at("m").get<double>();
  c.L = j.at("L").get<double>();
  c.n = j.at("n").get<std::size_t>();
  c.alpha = j.at("alpha").get<double>();
  c.b = j.contains("b") && !j["b"].is_null() ? std::optional<double>(j["b"].get<double>()) : std::nullopt;
  c.rho2 = j.at("rho2").get<double>();
  c.P = j.at("P").get<StructuredP>();
  c.mult = j.at("multipliers").get<MultiplierPair>();
  c.lyapunov_weights.clear();
  if (j.contains("lyapunov_weights"))
    for (const auto& w : j["lyapunov_weights"])
      c.lyapunov_weights.push_back({w.at("term").get<std::string>(), w.at("weight").get<double>()});
  c.provenance = j.value("provenance", std::string());
  c.notes = j.value("notes", std::vector<std::string>{});
  c.verified = j.value("verified", false);
  c.reference_rho2 = j.contains("reference_rho2") && !j["reference_rho2"].is_null()
                         ? std::optional<double>(j["reference_rho2"].get<double>())
                         : std::nullopt;
  c.alternatives.clear();
  if (j.contains("alternatives"))
    for (const auto& a : j["alternatives"]) c.alternatives.push_back(a.get<RateCertificate>());
}

void to_json(json& j, const BundleReport& r) {
  j = json{{"feasible", r.feasible},         {"nsd_ok", r.nsd_ok},
           {"pd_ok", r.pd_ok},               {"nonneg_ok", r.nonneg_ok},
           {"scale", r.scale},               {"worst_scaled", r.worst_scaled},
           {"nsd_max_raw", r.nsd_max_raw},   {"nsd_max_scaled", r.nsd_max_scaled},
           {"pd_min_raw", r.pd_min_raw}};
}

void to_json(json& j, const VerificationReport& r) {
  j = json{{"feasible", r.feasible}, {"P_positive", r.P_positive}, {"reduced", r.reduced}, {"detail", r.detail}};
  j["relaxed"] = r.relaxed ? json(*r.relaxed) : json(nullptr);
}

void to_json(json& j, const LmiBundle& b) {
  json nsd = json::array(), pd = json::array();
  for (const auto& m : b.nsd_blocks) nsd.push_back(symmatrix_to_json(m));
  for (const auto& m : b.pd_blocks) pd.push_back(symmatrix_to_json(m));
  j = json{{"label", b.label},
           {"nsd_blocks", nsd},
           {"pd_blocks", pd},
           {"nonneg_scalars", b.nonneg_scalars},
           {"params", b.params}};
}

void to_json(json& j, const Witness& w) {
  j = json{{"P", w.P}, {"multipliers", w.mult}, {"rho2", w.rho2}, {"objective", w.objective}, {"source", w.source}};
}

void to_json(json& j, const RestartDiagnostic& d) {
  j = json{{"restart", d.restart},
           {"seeded", d.seeded},
           {"evals", d.evals},
           {"best_scaled", d.best_scaled},
           {"best_raw", d.best_raw}};
}

void to_json(json& j, const SearchResult& r) {
  j = json{{"rho2_best", optional_number(r.rho2_best)},
           {"evals", r.evals},
           {"bisection_steps", r.bisection_steps},
           {"analytical_rho2", optional_number(r.analytical_rho2)},
           {"status", r.status},
           {"last_restarts", r.last_restarts}};
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
}

void to_json(json& j, const SagProbeResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"rho2", row.rho2},
                    {"block_diagonal_witness", row.block_diagonal_witness},
                    {"block_diagonal_best", row.block_diagonal_best},
                    {"invariant_witness", row.invariant_witness},
                    {"invariant_best", row.invariant_best}});
  j = json{{"m", r.m},
           {"L", r.L},
           {"n", r.n},
           {"alpha", r.alpha},
           {"assumption", to_string(r.assumption)},
           {"published_rho2", r.published_rho2},
           {"rows", rows},
           {"block_diagonal_monotone", r.block_diagonal_monotone},
           {"invariant_monotone", r.invariant_monotone}};
}

void to_json(json& j, const ContractionReport& r) {
  j = json{{"states", r.states}, {"max_violation", r.max_violation}, {"max_relative", r.max_relative}};
}

void to_json(json& j, const EmpiricalRate& r) {
  j = json{{"slope", r.slope},
           {"fitted_rho2", r.fitted_rho2},
           {"envelope_ok", r.envelope_ok},
           {"max_ratio", r.max_ratio}};
  j["first_violation"] = r.first_violation ? json(*r.first_violation) : json(nullptr);
}

void to_json(json& j, const SimulationTrace& t) {
  j = json{{"method", to_string(t.method)},
           {"alpha", t.alpha},
           {"rho2", t.rho2},
           {"trials", t.trials},
           {"seed", t.seed},
           {"iters", t.k.empty() ? 0 : t.k.back()},
           {"V0", t.V0},
           {"cond_P", t.cond_P},
           {"xi_dist2_0", t.xi_dist2_0},
           {"gradient_evals", t.gradient_evals}};
}

}  // namespace jumplmi
