#pragma once

#include <string>
#include <vector>

namespace cli {

// shortest decimal digits that round-trip to the exact double
std::string format_double(double v);

struct CsvColumn {
    std::string name;
};

// one "k,coeff" row per mode, 1-based k
std::string render_vector_csv(const std::vector<double>& coeffs);

// parse the same format back; throws std::runtime_error on malformed input
std::vector<double> parse_vector_csv(const std::string& text);

// trajectory rows "t,k,u_k" in time-major order
std::string render_trajectory_csv(const std::vector<double>& times,
                                  const std::vector<double>& u_row_major, int K);

// "k,lambda" rows prefixed by a "# label" comment line
std::string render_operator_csv(const std::vector<double>& eigenvalues,
                                const std::string& label);

// "t,x,u" rows
std::string render_field_csv(const std::vector<double>& times,
                             const std::vector<double>& xs,
                             const std::vector<double>& u_time_major);

// atomically-ish write a file (throws std::runtime_error on I/O failure)
void write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// one floating-point value per non-empty line
std::vector<double> parse_value_lines(const std::string& text);

} // namespace cli
