#pragma once

#include <string>
#include <vector>

namespace epd {

// Outcome of a finite-difference identity check on a grid.
struct ResidualReport {
    std::string identity;
    double max = 0.0;
    double mean = 0.0;
    int n1 = 0, n2 = 0;  // grid shape
    double step = 0.0;

    std::string to_json() const;
};

// Doubles rendered with 17 significant digits (lossless round trip).
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// CSV with a header row; every cell is formatted with format_double.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

}  // namespace epd
