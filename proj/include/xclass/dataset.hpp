#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "xclass/preprocess.hpp"

namespace xclass {

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Header row of feature names; an optional final column named "label".
struct Dataset {
    std::vector<std::string> names;
    std::vector<Vec> rows;
    std::vector<std::string> labels;

    bool labeled() const { return has_label_column || !labels.empty(); }
    std::size_t size() const { return rows.size(); }
    std::size_t dim() const { return names.size(); }
    std::vector<std::string> label_set() const;  // first-seen order

    bool has_label_column = false;
};

Dataset read_csv(const std::string& path);
Dataset parse_csv(std::istream& in, const std::string& source = "<stream>");
void write_csv(const Dataset& d, const std::string& path);
void write_csv(const Dataset& d, std::ostream& out);

// Shortest decimal that reads back to the same double.
std::string format_number(double v);

}  // namespace xclass
