#include "otto_cli/json_config.hpp"

#include "json.hpp"

#include <algorithm>

namespace otto::cli {

namespace {

std::string flag_name(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

std::string scalar_text(const nlohmann::json& value, const std::string& key) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    if (value.is_number()) return value.dump();
    throw CLI::ConversionError("config value for '" + key + "' must be a scalar or a list");
}

CLI::ConfigItem make_item(const std::string& key, const nlohmann::json& value,
                          const std::string& parent) {
    CLI::ConfigItem item;
    item.name = flag_name(key);
    if (!parent.empty()) item.parents = {parent};
    if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar_text(v, key));
    } else {
        item.inputs = {scalar_text(value, key)};
    }
    return item;
}

}  // namespace

std::string JsonConfig::to_config(const CLI::App* app, bool default_also, bool,
                                  std::string) const {
    nlohmann::ordered_json j;
    for (const CLI::Option* opt : app->get_options()) {
        if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
        const std::string name = opt->get_lnames().front();
        if (opt->count() > 0) {
            const auto& res = opt->results();
            if (res.size() == 1) {
                j[name] = res.front();
            } else {
                j[name] = res;
            }
        } else if (default_also && !opt->get_default_str().empty()) {
            j[name] = opt->get_default_str();
        }
    }
    return j.dump(2) + "\n";
}

std::vector<CLI::ConfigItem> JsonConfig::from_config(std::istream& input) const {
    nlohmann::json j;
    try {
        input >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");

    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
        const bool is_section =
            std::find(subcommands_.begin(), subcommands_.end(), key) != subcommands_.end();
        if (is_section) {
            if (!value.is_object()) {
                throw CLI::ConversionError("config section '" + key + "' must be an object");
            }
            if (key != active_) continue;
            for (const auto& [sub_key, sub_value] : value.items()) {
                items.push_back(make_item(sub_key, sub_value, active_));
            }
        } else if (!active_.empty()) {
            items.push_back(make_item(key, value, active_));
        }
    }
    return items;
}

}  // namespace otto::cli
