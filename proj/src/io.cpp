#include "gridcode/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

#include "gridcode/types.hpp"

namespace gridcode {

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header.size())
        throw validation_error("csv row width does not match header");
    rows.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::string out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    emit(header);
    for (const auto& r : rows) emit(r);
    return out;
}

std::string git_describe() {
    FILE* pipe = ::popen("git describe --always --dirty 2>/dev/null", "r");
    if (!pipe) return "unknown";
    char buf[256];
    std::string out;
    while (std::fgets(buf, sizeof(buf), pipe)) out += buf;
    ::pclose(pipe);
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
    return out.empty() ? "unknown" : out;
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::json j;
    j["command_line"] = m.command_line;
    j["seed"] = m.seed;
    j["code"] = m.code_name;
    j["parameters"] = m.parameters;
    j["target"] = m.target;
    j["git_describe"] = git_describe();
    j["outputs"] = m.outputs;
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw validation_error("cannot open output file: " + path);
    f << content;
    if (!f) throw validation_error("failed writing: " + path);
}

}  // namespace gridcode
