#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "pcfl/net/optimizer.hpp"
#include "pcfl/net/params.hpp"

namespace pcfl::net {

/// Checkpoint container ("PCKP" version 1, little-endian):
///   magic "PCKP" | u32 version | u64 step | u64 config_hash |
///   u32 config_len | config JSON | u32 n_tensors |
///   per tensor: u16 name_len | name | u32 rows | u32 cols | f32 row-major data
/// Tensor keys: parameters under their own names; normalization running
/// statistics as "stat.<layer>.mean" / "stat.<layer>.var"; optimizer moments
/// as "adam.m.<param>" / "adam.v.<param>". Tensors are sorted by key.
struct CheckpointMeta {
    std::int64_t step = 0;
    std::uint64_t config_hash = 0;
    std::string config_json;
};

void save_checkpoint(const std::filesystem::path& path, const ParamStore& store,
                     const AdamOptimizer* optimizer, const std::string& config_json,
                     std::uint64_t config_hash);

/// Fills an empty ParamStore (and optimizer moments when given). Returns the
/// stored metadata. Throws DataError on a malformed file.
CheckpointMeta load_checkpoint(const std::filesystem::path& path, ParamStore& store,
                               AdamOptimizer* optimizer = nullptr);

}  // namespace pcfl::net
