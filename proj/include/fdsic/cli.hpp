#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "fdsic/config.hpp"

namespace fdsic {

enum class Subcommand { theory, montecarlo, link, sweep, validate };

Subcommand parse_subcommand(const std::string& name);
std::string to_string(Subcommand s);

struct RunManifest {
    Subcommand subcommand = Subcommand::link;
    /// Empty means built-in defaults.
    std::string config_path;
    std::string output_path = "-";
    std::optional<std::uint64_t> base_seed;
    std::optional<std::int64_t> trials;
};

/// Runs one subcommand and writes its CSV to `out`. Rows are flushed as they
/// are produced; on failure a `# FAILED: <reason>` row ends the table and the
/// exception is rethrown.
void run_to_stream(const RunManifest& manifest, std::ostream& out);

/// Opens the output (stdout for "-"), runs, and returns the exit status.
/// Errors are reported on `err`.
int run(const RunManifest& manifest, std::ostream& err);

/// Thread count requested through FDSIC_THREADS, if set and valid.
std::optional<int> thread_override();

}  // namespace fdsic
