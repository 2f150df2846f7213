#pragma once

#include "CLI11.hpp"

#include <string>
#include <vector>

namespace otto::cli {

// JSON config reader for CLI11.
//
//   { "wa": 1, "theta_frac": 0.5, "report": { "variant": "qubit" } }
//
// Top-level scalars go to the active subcommand; an object named after a
// subcommand only applies when that subcommand runs. Underscores in keys
// match dashes in flag names.
class JsonConfig : public CLI::Config {
public:
    explicit JsonConfig(std::string active_subcommand, std::vector<std::string> subcommands)
        : active_(std::move(active_subcommand)), subcommands_(std::move(subcommands)) {}

    std::string to_config(const CLI::App* app, bool default_also, bool write_description,
                          std::string prefix) const override;
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;

private:
    std::string active_;
    std::vector<std::string> subcommands_;
};

}  // namespace otto::cli
