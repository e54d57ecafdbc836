#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

// Error with the offending line number (0 when not tied to a line).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? ("line " + std::to_string(line) + ": " + msg)
                                      : msg),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

enum class RunMode { forward, inverse, roundtrip };

struct OperatorSpec {
    std::string kind;                 // "dirichlet_1d" | "explicit"
    double length = 0.0;              // dirichlet_1d
    std::vector<double> eigenvalues;  // explicit
};

struct ProfileSpec {
    std::string kind;  // const | linear | exp_decay | cosine | affine_exp | sampled
    double value = 1.0;   // const
    double a = 0.0;       // linear: a + b t
    double b = 0.0;
    double rate = 1.0;    // exp_decay
    double omega = 1.0;   // cosine
    double beta = 0.0;    // affine_exp: 1 + beta e^t
    std::string file;     // sampled: one value per line, uniform grid on [0, T]
};

// Exactly one of the sources is set.
struct VectorSpec {
    std::vector<double> coeffs;       // inline list
    std::string file;                 // CSV with header "k,coeff"
    std::string analytic;             // named function, projected onto the basis
    bool zero = false;
    bool present = false;

    bool is_zero_or_absent() const { return !present || zero; }
};

struct QuadratureSpec {
    int panels = 16;
    int nodes_per_panel = 12;
    double grading_exponent = 0.0;
};

struct InverseSpec {
    double eps_b = 0.0;      // <= 0: library default
    double tol_solv = -1.0;  // < 0: library default
    std::map<int, double> free_values;
    std::string psi_path = "spectral";  // roundtrip: spectral | quadrature
};

struct OutputSpec {
    std::string dir;     // empty: resolved later (flag > env > default "out")
    int n_times = 129;
    int field_points = 0;  // physical-space samples per time (0 = skip field output)
};

struct RunConfig {
    double rho = 0.0;
    double T = 0.0;
    int K = 0;
    OperatorSpec op;
    ProfileSpec g;
    VectorSpec phi, psi, f;
    QuadratureSpec quad;
    InverseSpec inverse;
    OutputSpec output;

    // after parsing: check that the keys required by the mode are present
    void validate_for(RunMode mode) const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

const char* mode_name(RunMode mode);

} // namespace cli
