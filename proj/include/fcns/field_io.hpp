#pragma once

// Newline-delimited JSON formats.
//
// Field snapshot: a header line {"n": <int>, "trunc": <real or null>} followed
// by one line per mode {"k": [...], "re": [...], "im": [...]} in lexicographic
// k order. A null truncation radius means none.
//
// Trajectory: one line per recorded time,
//   {"t": .., "seminorms": {"0": .., ...}, "a0_abs": .., "trunc_loss": ..,
//    "trunc": <real or null>, "field_ref": <snapshot path or null>}
// with snapshot paths relative to the trajectory file.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fcns/linear_evolution.hpp"

namespace fcns {

void write_field(std::ostream& os, const FourierField& field);
FourierField read_field(std::istream& is);

void write_field_file(const std::filesystem::path& path, const FourierField& field);
FourierField read_field_file(const std::filesystem::path& path);

/// Writes `<dir>/<stem>.jsonl` plus one snapshot file per stored field
/// (`<stem>_snap_<index>.jsonl`, index zero-padded to six digits). Returns the trajectory path.
std::filesystem::path write_trajectory(const std::filesystem::path& dir, const std::string& stem,
                                       const Trajectory& trajectory);

/// Reads a trajectory written by write_trajectory, loading referenced
/// snapshots. The last snapshot (if any) becomes the final field.
Trajectory read_trajectory(const std::filesystem::path& path);

/// "0", "1", "2.5": the shortest decimal form of a degree.
std::string degree_key(double d);

}  // namespace fcns
