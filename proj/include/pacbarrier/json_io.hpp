// JSON encodings for problems, certificates, guarantees, and reports.
#pragma once

#include <json.hpp>
#include <string>

#include "pacbarrier/benchmarks.hpp"
#include "pacbarrier/certify.hpp"
#include "pacbarrier/guarantees.hpp"
#include "pacbarrier/problem.hpp"
#include "pacbarrier/verify.hpp"

namespace pacb {

using Json = nlohmann::json;

Json poly_to_json(const Polynomial& p);
Polynomial poly_from_json(const Json& j, const std::string& where);

Json region_to_json(const Region& r);
Region region_from_json(const Json& j, const std::string& where);

Json disturbance_to_json(const DisturbanceModel& m);
DisturbanceModel disturbance_from_json(const Json& j, const std::string& where);

Json problem_to_json(const CertificationProblem& p);
// Validates; a missing envelope is auto-filled from the one-step reach
// envelope (a notice is appended to *notice when given).
CertificationProblem problem_from_json(const Json& j, std::string* notice = nullptr);

Json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

Json guarantee_to_json(const PacGuarantee& g);

Json report_to_json(const VerificationReport& r);

Json sample_budget_to_json(const SampleBudget& b);

// File helpers.
Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace pacb
