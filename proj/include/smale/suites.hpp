#pragma once

#include <string>
#include <vector>

#include "smale/config.hpp"
#include "smale/report.hpp"

namespace smale {

// {axioms, homoclinic, partition, projection, operators, wg, ktheory,
//  duality, pv}
std::vector<std::string> suite_names();

// Executes one verification suite. Checks FAIL rather than throw; resource
// and validation problems in the configuration itself surface as exceptions
// for the caller to map onto usage/resource exit codes.
VerificationReport run_suite(const ExperimentConfig& cfg, const std::string& suite);

}  // namespace smale
