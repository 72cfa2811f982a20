#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ort/errors.hpp"

// CSV output: a '#'-prefixed header line naming the parameters, then one
// row per record. Floats carry 12 significant digits so files round-trip
// and identical runs are byte-identical.

namespace ort {

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

class CsvTable {
  public:
    explicit CsvTable(std::string comment) : comment_(std::move(comment)) {}

    void columns(std::vector<std::string> names) { names_ = std::move(names); }

    void row(const std::vector<std::string>& cells) {
        std::string line;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        rows_.push_back(std::move(line));
    }

    std::string str() const {
        std::ostringstream os;
        os << "# " << comment_ << "\n";
        for (size_t i = 0; i < names_.size(); ++i) os << (i ? "," : "") << names_[i];
        os << "\n";
        for (const std::string& r : rows_) os << r << "\n";
        return os.str();
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw Error("cannot open output file: " + path);
        out << str();
        if (!out) throw Error("failed writing output file: " + path);
    }

  private:
    std::string comment_;
    std::vector<std::string> names_;
    std::vector<std::string> rows_;
};

}  // namespace ort
