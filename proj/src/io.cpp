#include "dimerwave/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dimerwave::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

double parse_number(const std::string& s, const std::string& what) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidInput("cannot parse " + what + " '" + s + "'");
    }
    if (used != s.size()) throw InvalidInput("trailing characters in " + what + " '" + s + "'");
    return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const nlohmann::json& header,
               const std::vector<std::string>& names, const std::vector<Vec>& columns) {
    if (names.size() != columns.size()) throw InvalidInput("column names and data disagree");
    const std::size_t rows = columns.empty() ? 0 : columns[0].size();
    for (const auto& c : columns)
        if (c.size() != rows) throw InvalidInput("ragged CSV columns");
    auto out = open_out(path);
    out << "# " << header.dump() << '\n';
    for (std::size_t k = 0; k < names.size(); ++k) out << (k ? "," : "") << names[k];
    out << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t k = 0; k < columns.size(); ++k) out << (k ? "," : "") << format_double(columns[k][r]);
        out << '\n';
    }
    if (!out) throw Error("write failed for " + path.string());
}

nlohmann::json read_csv(const std::filesystem::path& path, std::vector<std::string>& names, std::vector<Vec>& columns) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    std::string line;
    nlohmann::json header = nlohmann::json::object();
    names.clear();
    columns.clear();
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            header = nlohmann::json::parse(line.substr(2));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (names.empty()) {
            names = cells;
            columns.assign(names.size(), Vec{});
            continue;
        }
        if (cells.size() != names.size()) throw InvalidInput("ragged row in " + path.string());
        for (std::size_t k = 0; k < cells.size(); ++k) columns[k].push_back(parse_number(cells[k], "CSV cell"));
    }
    return header;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("malformed JSON in " + path.string() + ": " + e.what());
    }
}

nlohmann::json to_json(const Vec& v) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) {
        if (std::isfinite(x))
            a.push_back(x);
        else
            a.push_back(nullptr);
    }
    return a;
}

Vec vec_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw InvalidInput("expected a JSON array of numbers");
    Vec v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(e.is_null() ? std::nan("") : e.get<double>());
    return v;
}

std::filesystem::path default_output_dir() {
    const char* d = std::getenv("DIMERWAVE_OUTPUT_DIR");
    if (d != nullptr && *d != '\0') return d;
    return ".";
}

Vec parse_mu_grid(const std::string& text) {
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string p;
        while (std::getline(ss, p, sep)) parts.push_back(p);
        return parts;
    };
    Vec mus;
    if (text.rfind("log:", 0) == 0) {
        const auto parts = split(text.substr(4), ':');
        if (parts.size() != 3) throw InvalidInput("log grid needs log:a:b:n, got '" + text + "'");
        const double a = parse_number(parts[0], "grid start");
        const double b = parse_number(parts[1], "grid end");
        const double nd = parse_number(parts[2], "grid count");
        if (!(a > 0.0) || !(b > a) || nd < 2.0 || nd != std::floor(nd))
            throw InvalidInput("log grid needs 0 < a < b and an integer n >= 2");
        const auto n = static_cast<int>(nd);
        for (int k = 0; k < n; ++k) mus.push_back(a * std::pow(b / a, static_cast<double>(k) / (n - 1)));
        mus.back() = b;
    } else if (text.rfind("list:", 0) == 0) {
        for (const auto& p : split(text.substr(5), ',')) mus.push_back(parse_number(p, "grid value"));
        if (mus.empty()) throw InvalidInput("empty mu list");
    } else {
        mus.push_back(parse_number(text, "mu"));
    }
    for (double m : mus)
        if (!(m > 0.0 && m < 1.0)) throw InvalidInput("mu values must lie in (0, 1)");
    return mus;
}

}  // namespace dimerwave::io
