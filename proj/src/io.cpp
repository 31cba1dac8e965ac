#include "clickmodel/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "clickmodel/types.hpp"

namespace clickmodel {

std::string meta_comment(const MetaHeader& meta) {
    std::string out = "# clickmodel format=" + std::to_string(kFormatVersion);
    if (!meta.command.empty()) out += " command=" + meta.command;
    if (meta.has_seed) out += " seed=" + std::to_string(meta.seed);
    for (const auto& [k, v] : meta.params) out += " " + k + "=" + v;
    return out;
}

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

double parse_double_field(std::string_view s, const char* what, std::size_t line_no) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || std::isnan(v))
        throw DataError("line " + std::to_string(line_no) + ": bad " + what + " '" +
                        std::string(s) + "'");
    return v;
}

std::int64_t parse_int_field(std::string_view s, const char* what, std::size_t line_no) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw DataError("line " + std::to_string(line_no) + ": bad " + what + " '" +
                        std::string(s) + "'");
    return v;
}

bool is_skippable_line(std::string_view line) {
    return line.empty() || line[0] == '#';
}

}  // namespace clickmodel
