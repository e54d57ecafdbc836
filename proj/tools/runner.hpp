#pragma once

#include "config.hpp"

#include <string>

namespace cli {

// exit codes shared by all modes
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;      // selftest failures, internal errors
inline constexpr int kExitConfig = 2;       // config/CLI errors
inline constexpr int kExitUnsolvable = 3;   // inverse data fails the solvability test
inline constexpr int kExitAccuracy = 4;     // tolerance could not be certified
inline constexpr int kExitIo = 5;           // file read/write problems

struct RunnerOptions {
    std::string config_path;
    std::string output_dir_flag;  // --output-dir; beats env and config
};

int run_mode(RunMode mode, const RunnerOptions& opt);
int run_ml_eval(double rho, double mu, double z);
int run_selftest(bool quick);

} // namespace cli
