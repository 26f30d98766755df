#pragma once

#include <string>
#include <vector>

namespace iga {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;   // measured-vs-expected summary
    double seconds = 0.0;
};

/// Run the verification suite. Every criterion runs even if earlier ones
/// fail; `outdir` (optional) receives a machine-readable report.json.
std::vector<CriterionResult> run_acceptance(const std::string& outdir = "");

} // namespace iga
