#include "xclass/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace xclass {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::vector<std::string> Dataset::label_set() const {
    std::vector<std::string> out;
    for (const auto& l : labels)
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
    return out;
}

Dataset parse_csv(std::istream& in, const std::string& source) {
    Dataset d;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split(line);
        if (!header) {
            header = true;
            width = cells.size();
            if (!cells.empty() && cells.back() == "label") {
                d.has_label_column = true;
                cells.pop_back();
            }
            if (cells.empty()) throw CsvError(source + ": header has no feature columns");
            d.names = cells;
            continue;
        }
        if (cells.size() != width)
            throw CsvError(source + ": line " + std::to_string(lineno) + ": expected " + std::to_string(width) +
                           " fields, got " + std::to_string(cells.size()));
        Vec row(d.names.size());
        for (std::size_t f = 0; f < d.names.size(); ++f) {
            const std::string& c = cells[f];
            const char* end = c.data() + c.size();
            auto [ptr, ec] = std::from_chars(c.data(), end, row[f]);
            if (c.empty() || ec != std::errc() || ptr != end)
                throw CsvError(source + ": line " + std::to_string(lineno) + ", column '" + d.names[f] +
                               "': not a number: '" + c + "'");
        }
        d.rows.push_back(std::move(row));
        if (d.has_label_column) d.labels.push_back(cells.back());
    }
    if (!header) throw CsvError(source + ": empty file");
    return d;
}

Dataset read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open '" + path + "'");
    return parse_csv(in, path);
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_csv(const Dataset& d, std::ostream& out) {
    for (std::size_t f = 0; f < d.names.size(); ++f) out << (f ? "," : "") << d.names[f];
    const bool lab = !d.labels.empty();
    if (lab) out << ",label";
    out << '\n';
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        for (std::size_t f = 0; f < d.rows[i].size(); ++f) out << (f ? "," : "") << format_number(d.rows[i][f]);
        if (lab) out << ',' << d.labels[i];
        out << '\n';
    }
}

void write_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CsvError("cannot write '" + path + "'");
    write_csv(d, out);
}

}  // namespace xclass
