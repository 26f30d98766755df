#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "iga/cases.hpp"
#include "iga/errors.hpp"
#include "iga/verify.hpp"

namespace {

int classify_exit(const std::exception& e) {
    if (dynamic_cast<const std::invalid_argument*>(&e) ||
        dynamic_cast<const std::domain_error*>(&e) ||
        dynamic_cast<const iga::UnresolvedTopologyError*>(&e))
        return 2;
    return 1;
}

void apply_flags(nlohmann::json& cfg, int order, const std::string& refine, int quad,
                 const std::string& bc_method) {
    if (order > 0) cfg["degree"] = order;
    if (!refine.empty()) {
        const auto colon = refine.find(':');
        cfg["refine"] = std::stoi(refine.substr(0, colon));
        if (colon != std::string::npos)
            cfg["refine_elevate"] = std::stoi(refine.substr(colon + 1));
    }
    if (quad > 0) cfg["quad"] = quad;
    if (!bc_method.empty()) cfg["bc_method"] = bc_method;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"igacore - isogeometric analysis kernel"};
    app.require_subcommand(1);

    std::string config_path, outdir = "out", refine, bc_method, case_name;
    int order = 0, quad = 0, levels = 3;

    CLI::App* run = app.add_subcommand("run", "run a case from a JSON config");
    run->add_option("config", config_path, "path to the case config (.json)")->required();
    run->add_option("--order", order, "basis degree override");
    run->add_option("--refine", refine, "refinement override h[:k]");
    run->add_option("--quad", quad, "quadrature points per direction");
    run->add_option("--bc-method", bc_method, "Dirichlet method override");
    run->add_option("--out", outdir, "output directory");

    CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("--out", outdir, "output directory for the report");

    CLI::App* conv = app.add_subcommand("convergence", "refinement study for a case");
    conv->add_option("case", case_name, "built-in case name")->required();
    conv->add_option("--levels", levels, "number of refinement levels");
    conv->add_option("--order", order, "basis degree override");
    conv->add_option("--out", outdir, "output directory");

    CLI::App* cases = app.add_subcommand("cases", "list built-in cases");
    bool dump = false;
    cases->add_option("case", case_name, "print the default config of one case");
    cases->add_flag("--dump", dump, "print default config JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            std::ifstream is(config_path);
            if (!is) {
                std::cerr << "error: cannot read config '" << config_path << "'\n";
                return 2;
            }
            std::stringstream buf;
            buf << is.rdbuf();
            nlohmann::json cfg;
            try {
                cfg = nlohmann::json::parse(buf.str());
            } catch (const nlohmann::json::parse_error& e) {
                std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
                return 2;
            }
            apply_flags(cfg, order, refine, quad, bc_method);
            const iga::CaseResult res = iga::run_case(cfg.dump(), outdir);
            for (const auto& row : res.rows)
                std::cout << row.case_name << " [" << row.mesh << ", p=" << row.p
                          << ", dofs=" << row.dofs << "] " << row.metric << " = " << row.value
                          << (row.ref != 0.0 ? " (ref " + std::to_string(row.ref) + ")" : "")
                          << "\n";
            for (const auto& f : res.artifacts) std::cout << "wrote " << f << "\n";
            return 0;
        }
        if (verify->parsed()) {
            const auto results = iga::run_acceptance(outdir);
            bool all = true;
            for (const auto& r : results) {
                std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": "
                          << r.name << " (" << r.detail << ") [" << r.seconds << " s]\n";
                all = all && r.passed;
            }
            if (!all) {
                std::cout << "failures:";
                for (const auto& r : results)
                    if (!r.passed) std::cout << " " << r.id;
                std::cout << "\n";
            }
            return all ? 0 : 1;
        }
        if (conv->parsed()) {
            nlohmann::json overrides = nlohmann::json::object();
            if (order > 0) overrides["degree"] = order;
            const iga::CaseResult res =
                iga::convergence_study(case_name, levels, overrides.dump(), outdir);
            for (const auto& row : res.rows)
                std::cout << row.case_name << " [" << row.mesh << ", p=" << row.p
                          << ", dofs=" << row.dofs << "] " << row.metric << " = " << row.value
                          << "\n";
            return 0;
        }
        if (cases->parsed()) {
            if (!case_name.empty())
                std::cout << iga::builtin_config(case_name) << "\n";
            else
                for (const auto& name : iga::case_catalog()) std::cout << name << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_exit(e);
    }
    return 0;
}
