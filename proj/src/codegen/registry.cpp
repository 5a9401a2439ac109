#include "lsysgen/codegen.hpp"
#include "lsysgen/error.hpp"

#include "json.hpp"

#include <array>
#include <fstream>

namespace lsysgen {
namespace {

constexpr std::array kRequired = {
    "if", "else", "loop", "call", "new", "insert", "remove", "contains",
    "release", "scope", "function", "unit.main", "file.main",
};

bool has_key(const BackendTemplates& t, std::string_view key) {
    for (const auto& [k, v] : t.entries) {
        if (k == key || (k.size() > key.size() && k.compare(0, key.size(), key) == 0 && k[key.size()] == '@')) {
            return true;
        }
    }
    return false;
}

} // namespace

std::vector<std::string> missing_templates(const BackendTemplates& templates) {
    std::vector<std::string> missing;
    for (const char* key : kRequired) {
        if (!has_key(templates, key)) {
            missing.emplace_back(key);
        }
    }
    return missing;
}

BackendRegistry BackendRegistry::with_builtins() {
    BackendRegistry r;
    r.register_backend("c", c_backend_templates());
    r.register_backend("go", go_backend_templates());
    return r;
}

void BackendRegistry::register_backend(const std::string& id, BackendTemplates templates) {
    if (backends_.count(id) != 0) {
        throw BackendError("backend '" + id + "' is already registered");
    }
    if (auto missing = missing_templates(templates); !missing.empty()) {
        std::string list;
        for (const auto& m : missing) {
            list += list.empty() ? m : ", " + m;
        }
        throw BackendError("backend '" + id + "' is missing templates: " + list);
    }
    backends_.emplace(id, std::move(templates));
}

const BackendTemplates& BackendRegistry::get(const std::string& id) const {
    auto it = backends_.find(id);
    if (it == backends_.end()) {
        throw BackendError("unsupported backend '" + id + "'");
    }
    return it->second;
}

std::vector<std::string> BackendRegistry::ids() const {
    std::vector<std::string> out;
    for (const auto& [id, t] : backends_) {
        out.push_back(id);
    }
    return out;
}

const BackendRegistry& builtin_backends() {
    static const BackendRegistry registry = BackendRegistry::with_builtins();
    return registry;
}

BackendTemplates load_templates_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) {
        throw BackendError("cannot open template file " + file.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw BackendError("invalid template file " + file.string() + ": " + e.what());
    }
    if (!j.is_object()) {
        throw BackendError("template file must hold a JSON object");
    }
    BackendTemplates t;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string()) {
            throw BackendError("template '" + key + "' is not a string");
        }
        t.entries.emplace(key, value.get<std::string>());
    }
    return t;
}

} // namespace lsysgen
