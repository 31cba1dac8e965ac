#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clickmodel {

/// Reproducibility header embedded in every artifact file: the command,
/// seed and parameters that produced it. Tabular files carry it as a
/// leading `# clickmodel ...` comment line, JSON files as a `_meta` object.
struct MetaHeader {
    std::string command;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::vector<std::pair<std::string, std::string>> params;

    MetaHeader& param(std::string key, std::string value) {
        params.emplace_back(std::move(key), std::move(value));
        return *this;
    }
};

inline constexpr int kFormatVersion = 1;

/// "# clickmodel format=1 command=fit seed=7 k=v ..."
std::string meta_comment(const MetaHeader& meta);

/// Shortest round-trip decimal representation.
std::string fmt_double(double v);

std::vector<std::string_view> split_fields(std::string_view line, char sep);

double parse_double_field(std::string_view s, const char* what, std::size_t line_no);
std::int64_t parse_int_field(std::string_view s, const char* what, std::size_t line_no);

/// True for blank lines and `#` comment lines, which all tabular readers skip.
bool is_skippable_line(std::string_view line);

}  // namespace clickmodel
