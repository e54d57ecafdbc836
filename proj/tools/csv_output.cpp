#include "csv_output.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace cli {

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, p);
}

std::string render_vector_csv(const std::vector<double>& coeffs) {
    std::string out = "k,coeff\n";
    for (size_t i = 0; i < coeffs.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_double(coeffs[i]);
        out += '\n';
    }
    return out;
}

namespace {

// tolerate Windows line endings
void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

} // namespace

std::vector<double> parse_vector_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("coefficient CSV is empty");
    strip_cr(line);
    if (line != "k,coeff")
        throw std::runtime_error("coefficient CSV must start with header 'k,coeff'");
    std::vector<double> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("coefficient CSV line " + std::to_string(lineno) +
                                     ": expected 'k,coeff'");
        int k = 0;
        {
            const char* b = line.data();
            const char* e = b + comma;
            auto [p, ec] = std::from_chars(b, e, k);
            if (ec != std::errc{} || p != e)
                throw std::runtime_error("coefficient CSV line " +
                                         std::to_string(lineno) + ": bad index");
        }
        if (k != int(out.size()) + 1)
            throw std::runtime_error("coefficient CSV line " + std::to_string(lineno) +
                                     ": indices must run 1..K in order");
        double v = 0.0;
        {
            const char* b = line.data() + comma + 1;
            const char* e = line.data() + line.size();
            auto [p, ec] = std::from_chars(b, e, v);
            if (ec != std::errc{} || p != e)
                throw std::runtime_error("coefficient CSV line " +
                                         std::to_string(lineno) + ": bad value");
        }
        out.push_back(v);
    }
    if (out.empty()) throw std::runtime_error("coefficient CSV has no rows");
    return out;
}

std::string render_trajectory_csv(const std::vector<double>& times,
                                  const std::vector<double>& u_row_major, int K) {
    std::string out = "t,k,u_k\n";
    for (size_t i = 0; i < times.size(); ++i) {
        for (int k = 1; k <= K; ++k) {
            out += format_double(times[i]);
            out += ',';
            out += std::to_string(k);
            out += ',';
            out += format_double(u_row_major[i * size_t(K) + size_t(k - 1)]);
            out += '\n';
        }
    }
    return out;
}

std::string render_operator_csv(const std::vector<double>& eigenvalues,
                                const std::string& label) {
    std::string out = "# " + label + "\n";
    out += "k,lambda\n";
    for (size_t i = 0; i < eigenvalues.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_double(eigenvalues[i]);
        out += '\n';
    }
    return out;
}

std::string render_field_csv(const std::vector<double>& times,
                             const std::vector<double>& xs,
                             const std::vector<double>& u_time_major) {
    std::string out = "t,x,u\n";
    for (size_t i = 0; i < times.size(); ++i) {
        for (size_t j = 0; j < xs.size(); ++j) {
            out += format_double(times[i]);
            out += ',';
            out += format_double(xs[j]);
            out += ',';
            out += format_double(u_time_major[i * xs.size() + j]);
            out += '\n';
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_value_lines(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> out;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // tolerate surrounding whitespace and CR
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t b = line.find_last_not_of(" \t\r");
        const char* begin = line.data() + a;
        const char* end = line.data() + b + 1;
        double v = 0.0;
        auto [p, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc{} || p != end)
            throw std::runtime_error("sample file line " + std::to_string(lineno) +
                                     ": expected one number, got '" +
                                     std::string(begin, end) + "'");
        out.push_back(v);
    }
    return out;
}

} // namespace cli
