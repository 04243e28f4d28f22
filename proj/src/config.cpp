#include "cimfem/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cimfem {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_double(const std::string& s) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

std::size_t to_count(const std::string& s) {
    if (const auto caret = s.find('^'); caret != std::string::npos) {
        const std::size_t base = to_count(s.substr(0, caret));
        const std::size_t exp = to_count(s.substr(caret + 1));
        if (exp > 40) throw std::invalid_argument("exponent too large: '" + s + "'");
        std::size_t v = 1;
        for (std::size_t i = 0; i < exp; ++i) v *= base;
        return v;
    }
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
        throw std::invalid_argument("not a count: '" + s + "'");
    return v;
}

}  // namespace

KeyValueConfig parse_config(std::istream& in) {
    KeyValueConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string s = trim(line);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(s).substr(0, eq));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        cfg[key] = trim(std::string_view(s).substr(eq + 1));
    }
    return cfg;
}

KeyValueConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    return parse_config(f);
}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) {
        if (item.empty()) continue;
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(to_double(parts[0]));
        } else if (parts.size() == 3) {
            const double a = to_double(parts[0]), b = to_double(parts[1]), st = to_double(parts[2]);
            if (!(st > 0.0)) throw std::invalid_argument("range step must be positive: '" + item + "'");
            const auto count = static_cast<long>(std::floor((b - a) / st + 1e-9));
            for (long k = 0; k <= count; ++k) out.push_back(a + static_cast<double>(k) * st);
        } else {
            throw std::invalid_argument("bad list entry '" + item + "'");
        }
    }
    return out;
}

std::vector<std::size_t> parse_count_list(std::string_view text) {
    std::vector<std::size_t> out;
    for (const auto& item : split(text, ',')) {
        if (item.empty()) continue;
        const auto parts = split(item, ':');
        if (parts.size() == 1) {
            out.push_back(to_count(parts[0]));
        } else if (parts.size() == 3) {
            const std::size_t a = to_count(parts[0]), b = to_count(parts[1]), st = to_count(parts[2]);
            if (st == 0) throw std::invalid_argument("range step must be positive: '" + item + "'");
            for (std::size_t v = a; v <= b; v += st) out.push_back(v);
        } else {
            throw std::invalid_argument("bad list entry '" + item + "'");
        }
    }
    return out;
}

}  // namespace cimfem
