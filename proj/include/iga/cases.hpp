#pragma once

#include <string>
#include <vector>

#include "iga/patch.hpp"

namespace iga {

/// One metrics record, serialized as a CSV row
/// `case,mesh,p,dofs,metric,value,ref,rel_error`.
struct MetricRow {
    std::string case_name;
    std::string mesh;
    int p = 0;
    int dofs = 0;
    std::string metric;
    double value = 0.0;
    double ref = 0.0;
    double rel_error = 0.0;
};

struct CaseResult {
    std::vector<MetricRow> rows;
    std::vector<std::string> artifacts;  // files written
};

/// Built-in case names, each runnable end to end under default settings.
std::vector<std::string> case_catalog();

/// Default JSON configuration of a built-in case (throws for unknown names).
std::string builtin_config(const std::string& name);

/// Run a case from its JSON configuration text. Writes VTK and a metrics CSV
/// into `outdir` (created if missing) unless output is disabled in config.
CaseResult run_case(const std::string& config_json, const std::string& outdir);

/// Append rows to a metrics CSV (with header when the file is new).
void write_metrics_csv(const std::string& path, const std::vector<MetricRow>& rows);

/// Convergence study: run `levels` refinements of a case with an exact field
/// and report errors and observed rates. Returns one row per level plus rate
/// rows; also written to CSV in outdir.
CaseResult convergence_study(const std::string& case_name, int levels,
                             const std::string& overrides_json, const std::string& outdir);

} // namespace iga
