#include "lsysgen/bench.hpp"
#include "lsysgen/error.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lsysgen {

using nlohmann::json;

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string Manifest::to_json() const {
    json j;
    j["schema"] = kSchema;
    j["specName"] = request.specName;
    j["specText"] = request.specText;
    j["generations"] = request.generations;
    j["seed"] = request.plan.seed;
    j["valueRange"] = request.plan.valueRange;
    j["tripCount"] = request.plan.tripCount;
    j["container"] = container_name(request.plan.container);
    j["backend"] = request.backend;
    j["splitFiles"] = request.splitFiles;
    j["debugDefault"] = request.debugTrace;
    j["maxItems"] = request.maxItems;
    j["functionCount"] = functionCount;
    j["statementCount"] = statementCount;
    j["files"] = json::array();
    for (const auto& f : files) {
        j["files"].push_back({{"path", f.path}, {"bytes", f.bytes}, {"fnv1a64", f.fnv1a64}});
    }
    j["compileInputs"] = compileInputs;
    json counts = json::object();
    for (const auto& [op, n] : oracleStats.opCounts) {
        counts[std::string(op_keyword(op))] = n;
    }
    j["oracle"] = {{"path", oraclePath},
                   {"checksum", oracleChecksum},
                   {"opCounts", counts},
                   {"maxLive", oracleStats.maxLive},
                   {"liveAtExit", oracleStats.liveAtExit}};
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

Manifest Manifest::from_json(std::string_view text) {
    Manifest m;
    try {
        const json j = json::parse(text);
        if (j.at("schema").get<std::string>() != kSchema) {
            throw Error("unsupported manifest schema '" + j.at("schema").get<std::string>() + "'");
        }
        m.request.specName = j.at("specName").get<std::string>();
        m.request.specText = j.at("specText").get<std::string>();
        m.request.generations = j.at("generations").get<unsigned>();
        m.request.plan.seed = j.at("seed").get<std::uint64_t>();
        m.request.plan.valueRange = j.at("valueRange").get<std::int64_t>();
        m.request.plan.tripCount = j.at("tripCount").get<int>();
        const auto container = parse_container(j.at("container").get<std::string>());
        if (!container) {
            throw Error("manifest names an unknown container");
        }
        m.request.plan.container = *container;
        m.request.backend = j.at("backend").get<std::string>();
        m.request.splitFiles = j.at("splitFiles").get<bool>();
        m.request.debugTrace = j.at("debugDefault").get<bool>();
        m.request.maxItems = j.at("maxItems").get<std::size_t>();
        m.functionCount = j.at("functionCount").get<std::size_t>();
        m.statementCount = j.at("statementCount").get<std::size_t>();
        for (const auto& f : j.at("files")) {
            m.files.push_back({f.at("path").get<std::string>(), f.at("bytes").get<std::uint64_t>(),
                               f.at("fnv1a64").get<std::string>()});
        }
        m.compileInputs = j.at("compileInputs").get<std::vector<std::string>>();
        const auto& o = j.at("oracle");
        m.oraclePath = o.at("path").get<std::uint64_t>();
        m.oracleChecksum = o.at("checksum").get<std::uint64_t>();
        m.oracleStats.checksum = m.oracleChecksum;
        m.oracleStats.maxLive = o.at("maxLive").get<std::uint64_t>();
        m.oracleStats.liveAtExit = o.at("liveAtExit").get<std::int64_t>();
        for (const auto& [name, n] : o.at("opCounts").items()) {
            for (auto op : {OpKind::New, OpKind::Insert, OpKind::Remove, OpKind::Contains}) {
                if (op_keyword(op) == name) {
                    m.oracleStats.opCounts[op] = n.get<std::uint64_t>();
                }
            }
        }
        m.warnings = j.at("warnings").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw Error(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

Manifest Manifest::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw Error("cannot open manifest " + file.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

} // namespace lsysgen
