#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gridcode {

// fixed-format number rendering so reruns are byte-identical
std::string format_number(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
    std::string str() const;  // header + rows, '\n' endings, '.' decimal
};

struct RunManifest {
    std::string command_line;
    std::uint64_t seed = 0;
    std::string code_name;
    std::string parameters;          // grid / flag summary
    std::string target;              // what the output is meant to show
    std::vector<std::string> outputs;
};

std::string git_describe();
std::string manifest_json(const RunManifest& m);

void write_file(const std::string& path, const std::string& content);

}  // namespace gridcode
