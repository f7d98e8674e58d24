/// @file snapshot.hpp
/// @brief Binary snapshot container.
///
/// Layout, all numbers little-endian:
///
///   char[8]  "MAJDASNP"
///   u32      version (1)
///   u32      n1, n2, n3
///   f64      t
///   f64      omega[(n3 + 1) n2 n1]     x1 fastest, then x2, then layer
///   f64      u_mean[(n3 + 1)][2]
///   -- optional restart trailer --
///   u8       1
///   f64      dt_prev
///   f64      n_prev[(n3 + 1) n2 (n1/2 + 1)][2]   (re, im) of the previous
///                                               advection term
///
/// Readers that only want the fields may stop after u_mean.
#pragma once

#include "majda/solver.hpp"

#include <filesystem>
#include <stdexcept>
#include <vector>

namespace majda {

inline constexpr char kSnapshotMagic[9] = "MAJDASNP";
inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Malformed or truncated container; offset is the byte where reading failed.
class SnapshotFormatError : public std::runtime_error {
public:
    SnapshotFormatError(const std::filesystem::path& path, std::size_t offset, const std::string& what);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

struct Snapshot {
    LayeredGrid grid;
    LayeredState state;
    AdvectionHistory history;  ///< valid only when the trailer was present
};

/// Writes to a temporary file next to path and renames it into place.  The
/// trailer is written when history is non-null and valid.
void write_snapshot(const std::filesystem::path& path, const LayeredGrid& grid, const LayeredState& state,
                    const AdvectionHistory* history = nullptr);

Snapshot read_snapshot(const std::filesystem::path& path);

/// "snapshot_000042.bin"
std::string snapshot_file_name(long step);

/// Snapshot files in dir, ordered by step.
std::vector<std::filesystem::path> list_snapshots(const std::filesystem::path& dir);

}  // namespace majda
