#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ringdyn/errors.hpp"
#include "ringdyn/scenario.hpp"

namespace {

int emit_error(const char* type, const std::string& message, int code,
               const std::string& field = "") {
    nlohmann::json err{{"type", type}, {"message", message}, {"exit_code", code}};
    if (!field.empty()) err["field"] = field;
    std::cerr << err.dump(2) << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"flat and curved n-body rings: simulation, construction, analysis"};
    app.require_subcommand(1);

    std::string config_path, out_dir, expect;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scenario config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory for artifacts")->required();
    };

    CLI::App* simulate = app.add_subcommand("simulate", "integrate an n-body scenario");
    add_common(simulate);
    CLI::App* construct = app.add_subcommand("construct", "synthesize a pulsating ring orbit");
    add_common(construct);
    CLI::App* analyze = app.add_subcommand("analyze", "classify a trajectory, emit gap series");
    add_common(analyze);
    analyze->add_option("--expect", expect, "fail with exit 4 unless the classification holds")
        ->check(CLI::IsMember({"ring", "regular", "homographic", "relative-equilibrium"}));
    CLI::App* check_law = app.add_subcommand("check-law", "admissibility and kernel reports");
    add_common(check_law);
    CLI::App* solve = app.add_subcommand("solve-config", "search ring angle configurations");
    add_common(solve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return emit_error("usage", e.what(), 2);
    }

    try {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec)
            return emit_error("validation",
                              "cannot create output directory '" + out_dir + "'", 2);
        nlohmann::json config = ringdyn::load_config(config_path);
        std::string config_dir = std::filesystem::path(config_path).parent_path().string();
        if (config_dir.empty()) config_dir = ".";

        if (simulate->parsed()) {
            ringdyn::run_simulate(config, config_dir, out_dir);
        } else if (construct->parsed()) {
            ringdyn::run_construct(config, config_dir, out_dir);
        } else if (analyze->parsed()) {
            nlohmann::json cls = ringdyn::run_analyze(config, config_dir, out_dir);
            if (!expect.empty()) {
                std::string key = expect == "relative-equilibrium" ? "relative_equilibrium"
                                                                   : expect;
                bool ok = cls.contains(key) && cls[key].is_boolean() && cls[key].get<bool>();
                if (!ok)
                    return emit_error("expectation",
                                      "classification does not satisfy --expect " + expect, 4);
            }
        } else if (check_law->parsed()) {
            ringdyn::run_check_law(config, config_dir, out_dir);
        } else if (solve->parsed()) {
            ringdyn::run_solve_config(config, config_dir, out_dir);
        }
        return 0;
    } catch (const ringdyn::ValidationError& e) {
        return emit_error("validation", e.what(), 2, e.field);
    } catch (const ringdyn::GeometryError& e) {
        return emit_error("geometry", e.what(), 2);
    } catch (const ringdyn::CollisionError& e) {
        return emit_error("collision", e.what(), 3);
    } catch (const ringdyn::SingularConfigError& e) {
        return emit_error("singular", e.what(), 3);
    } catch (const ringdyn::StiffnessError& e) {
        return emit_error("stiffness", e.what(), 3);
    } catch (const ringdyn::ExtrapolationError& e) {
        return emit_error("extrapolation", e.what(), 3);
    } catch (const ringdyn::TrackingError& e) {
        return emit_error("tracking", e.what(), 3);
    } catch (const ringdyn::InfeasibleProfileError& e) {
        return emit_error("infeasible", e.what(), 3);
    } catch (const ringdyn::Error& e) {
        return emit_error("numerical", e.what(), 3);
    } catch (const std::exception& e) {
        return emit_error("internal", e.what(), 3);
    }
}
