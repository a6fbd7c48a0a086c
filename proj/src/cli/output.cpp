#include "dirac/cli/output.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <fmt/format.h>

namespace dirac::cli {

std::string number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

Csv::Csv(std::initializer_list<std::string_view> header) {
    for (auto h : header) add(h);
    end();
}

Csv::Csv(const std::vector<std::string>& header) {
    for (const auto& h : header) add(h);
    end();
}

Csv& Csv::add(std::string_view field) {
    if (!fresh_) text_ += ',';
    text_ += field;
    fresh_ = false;
    return *this;
}

Csv& Csv::end() {
    text_ += '\n';
    fresh_ = true;
    return *this;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace dirac::cli
