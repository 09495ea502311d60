#pragma once

#include "cdmd/dmd.hpp"
#include "cdmd/types.hpp"

#include <string>
#include <utility>

// Snapshot files hold one sequential snapshot matrix (columns are consecutive
// samples, dt apart); the loader forms the lagged pair from consecutive
// columns. Two formats:
//
//   CSV    first line `# dt=<value>`, then one matrix row per line of
//          comma-separated decimals (shortest round-trip formatting, so a
//          save/load cycle is bit-exact).
//   binary little-endian: 8-byte magic "CDMDSNP1", uint64 rows, uint64 cols,
//          float64 dt, then rows*cols float64 payload in column-major order.

namespace cdmd::io {

enum class Format { Csv, Binary, Auto };  // Auto: by extension, .csv vs anything else

/// Sequence matrix plus its sampling interval.
struct Sequence {
    Mat states;
    double dt;
};

void save_sequence(const std::string& path, const Mat& states, double dt,
                   Format format = Format::Auto);

Sequence load_sequence(const std::string& path, Format format = Format::Auto);

/// Loads a sequence of N >= 2 snapshots and pairs consecutive columns.
/// Throws ParseError for malformed input (byte offset for binary, 1-based
/// line number for CSV) and NumericalError for non-finite entries.
SnapshotData load_snapshots(const std::string& path, Format format = Format::Auto);

/// Shortest round-trip decimal for a double (what the CSV writers use).
std::string format_double(double v);

}  // namespace cdmd::io
