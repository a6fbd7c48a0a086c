#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace dirac::cli {

/// Shortest decimal form that round-trips; "inf", "-inf", "nan" otherwise.
std::string number(double v);

/// Plain CSV text builder; no quoting, fields are numbers or bare words.
class Csv {
public:
    explicit Csv(std::initializer_list<std::string_view> header);
    explicit Csv(const std::vector<std::string>& header);

    Csv& add(std::string_view field);
    Csv& add(double v) { return add(number(v)); }
    Csv& add(long long v) { return add(std::to_string(v)); }
    Csv& add(int v) { return add(static_cast<long long>(v)); }
    Csv& add(std::size_t v) { return add(std::to_string(v)); }
    Csv& add(bool v) { return add(v ? std::string_view("true") : std::string_view("false")); }
    Csv& add(const char* s) { return add(std::string_view(s)); }
    /// Terminates the current row.
    Csv& end();

    const std::string& text() const { return text_; }

private:
    std::string text_;
    bool fresh_ = true;
};

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace dirac::cli
