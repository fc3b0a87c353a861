#pragma once

// CSV emission: one header line, 17-significant-digit floats so every value
// round-trips to the same double.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace sperturb {

inline std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names) { line(names); }

    void row(const std::vector<std::string>& fields) { line(fields); }

    void row_values(const std::vector<double>& values) {
        std::vector<std::string> fields;
        fields.reserve(values.size());
        for (double v : values)
            fields.push_back(csv_double(v));
        line(fields);
    }

  private:
    void line(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i)
                out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

    std::ostream& out_;
};

}  // namespace sperturb
