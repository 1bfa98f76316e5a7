#include "output.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <system_error>

#include <unistd.h>

namespace opexp::cli {

namespace fs = std::filesystem;

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (v == 0.0) {
        v = 0.0;
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

nlohmann::ordered_json manifest_core(const RunManifest& m)
{
    nlohmann::ordered_json j;
    j["experiment"] = m.spec.name;
    j["preset"] = m.spec.preset;
    j["tool"] = "opexp";
    j["tool_version"] = m.tool_version;
    j["seed"] = m.spec.seed;
    j["format"] = to_string(m.spec.format);
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.spec.parameters) {
        params[k] = v;
    }
    for (const auto& [k, v] : m.spec.options) {
        params[k] = v;
    }
    j["parameters"] = params;
    nlohmann::ordered_json report = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.tolerance_report) {
        report[k] = v;
    }
    j["tolerance_report"] = report;
    return j;
}

nlohmann::ordered_json manifest_full(const RunManifest& m)
{
    nlohmann::ordered_json j = manifest_core(m);
    j["threads"] = m.spec.threads;
    j["wall_seconds"] = m.wall_seconds;
    j["output"] = m.spec.output_path.string();
    return j;
}

std::string render_csv(const Table& table)
{
    std::string s;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        s += c ? "," : "";
        s += table.columns[c];
    }
    s += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            s += c ? "," : "";
            s += format_double(row[c]);
        }
        s += '\n';
    }
    return s;
}

std::string render_json(const Table& table, const RunManifest& m)
{
    nlohmann::ordered_json j;
    j["manifest"] = manifest_core(m);
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    return j.dump(1) + "\n";
}

fs::path resolve_output_path(const fs::path& requested, const std::string& stem, Format format)
{
    fs::path root;
    if (const char* env = std::getenv("OPEXP_OUT_DIR"); env != nullptr && *env != '\0') {
        root = env;
    }
    if (requested.empty()) {
        const std::string name = stem + (format == Format::Json ? ".json" : ".csv");
        return root.empty() ? fs::path(name) : root / name;
    }
    if (requested.is_absolute() || root.empty()) {
        return requested;
    }
    return root / requested;
}

void write_atomic(const fs::path& path, const std::string& content)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open " + tmp.string() + " for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            fs::remove(tmp, ec);
            throw IoError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename onto " + path.string());
    }
}

fs::path sidecar_manifest_path(const fs::path& data_path)
{
    fs::path p = data_path;
    p += ".manifest.json";
    return p;
}

} // namespace opexp::cli
