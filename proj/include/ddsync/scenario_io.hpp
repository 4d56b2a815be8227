#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "ddsync/scenario.hpp"
#include "ddsync/simloop.hpp"
#include "ddsync/synthesis.hpp"

namespace ddsync {

/// Raised on malformed input files; the message names the file and the
/// offending field or line.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario document: JSON with matrices either inline as row-major
/// nested arrays or referenced as {"csv": "relative/path"} (one matrix
/// per CSV file, comma-separated rows, time along columns for data
/// matrices).
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

/// Protocol document: the deployable gains plus the certificates and the
/// coupling spectrum they were verified against. Numbers survive a
/// write/read round trip bit-exactly.
void save_protocol(const ProtocolGains& protocol, const std::filesystem::path& path);
ProtocolGains load_protocol(const std::filesystem::path& path);

Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);

/// One row per time step; the header line documents every column.
void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path);

}  // namespace ddsync
