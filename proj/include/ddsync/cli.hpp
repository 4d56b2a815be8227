#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace ddsync {

/// Exit-code contract shared by every subcommand: 0 success / informative,
/// 2 negative decision (not informative, assumption violated, verdict
/// false), 1 operational error (unreadable file, malformed input,
/// dimension mismatch).
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

struct CliOptions {
    double tol_informativity = 1e-8;
    double tol_stability = 1e-9;
    double tol_verdict = 1e-3;
    double tail_fraction = 0.25;
    std::uint64_t seed = 1;
    std::optional<std::string> f_matrix_path;  // CSV override for F
};

/// Assumption checks plus per-follower informativity report.
int run_check(const std::string& scenario_path, const CliOptions& options,
              std::ostream& out, std::ostream& err);

/// Certifies the scenario and writes the protocol file.
int run_synthesize(const std::string& scenario_path, const std::string& out_path,
                   const CliOptions& options, std::ostream& out, std::ostream& err);

/// Simulates a synthesized protocol against the scenario's true models
/// (w = 0) and prints the error report and verdict.
int run_simulate(const std::string& scenario_path, const std::string& protocol_path,
                 std::size_t horizon, const std::string& trace_path,
                 const CliOptions& options, std::ostream& out, std::ostream& err);

/// check + synthesize + simulate on the embedded demo scenario.
int run_demo(const CliOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ddsync
