#include "lsysgen/bench.hpp"

#include "json.hpp"

#include <cstdio>
#include <sstream>

namespace lsysgen {
namespace {

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

template <typename T>
std::string opt_text(const std::optional<T>& v) {
    return v ? std::to_string(*v) : std::string();
}

} // namespace

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(value);
    }
    std::string out = "\"";
    for (const char c : value) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string measurements_csv(const std::vector<Measurement>& rows) {
    std::ostringstream out;
    out << "specName,generation,backend,compilerCmd,flags,path,seed,container,compileTimeMs,runTimeMs,"
           "binaryBytes,textBytes,checksum,oracleChecksum,status,error\r\n";
    for (const auto& m : rows) {
        out << csv_field(m.specName) << ',' << m.generation << ',' << csv_field(m.backend) << ','
            << csv_field(m.compilerCmd) << ',' << csv_field(m.flags) << ',' << m.path << ',' << m.seed << ','
            << csv_field(m.containerKind) << ',' << fixed(m.compileTimeMs) << ',' << fixed(m.runTimeMs) << ','
            << m.binaryBytes << ',' << opt_text(m.textBytes) << ',' << opt_text(m.checksum) << ','
            << m.oracleChecksum << ',' << csv_field(m.status) << ',' << csv_field(m.error) << "\r\n";
    }
    return out.str();
}

std::string measurements_jsonl(const std::vector<Measurement>& rows) {
    std::string out;
    for (const auto& m : rows) {
        nlohmann::ordered_json j;
        j["specName"] = m.specName;
        j["generation"] = m.generation;
        j["backend"] = m.backend;
        j["compilerCmd"] = m.compilerCmd;
        j["flags"] = m.flags;
        j["path"] = m.path;
        j["seed"] = m.seed;
        j["container"] = m.containerKind;
        j["compileTimeMs"] = m.compileTimeMs;
        j["runTimeMs"] = m.runTimeMs;
        j["binaryBytes"] = m.binaryBytes;
        j["textBytes"] = m.textBytes ? nlohmann::ordered_json(*m.textBytes) : nlohmann::ordered_json(nullptr);
        j["checksum"] = m.checksum ? nlohmann::ordered_json(*m.checksum) : nlohmann::ordered_json(nullptr);
        j["oracleChecksum"] = m.oracleChecksum;
        j["status"] = m.status;
        j["error"] = m.error;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "i,path,t_ms,ti_ms,ratio\r\n";
    for (const auto& r : rows) {
        char ratio[64];
        std::snprintf(ratio, sizeof ratio, "%.4f", r.ratio);
        out << r.bits << ',' << r.path << ',' << fixed(r.tMs) << ',' << fixed(r.tiMs) << ',' << ratio << "\r\n";
    }
    return out.str();
}

} // namespace lsysgen
