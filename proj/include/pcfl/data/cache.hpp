#pragma once

#include <filesystem>

#include "pcfl/types.hpp"

namespace pcfl::data {

/// Binary cache ("PCLB" version 1, little-endian):
///   header { magic "PCLB", version u32 = 1, sample_count u32, points_per_sample u32 }
///   per sample { label i32, source_id_len u16, source_id bytes,
///                points f32 x (3 * points_per_sample), xyz per point }
/// The side-car manifest is UTF-8 lines "path<TAB>label<TAB>source_id".
void write_cache(const std::filesystem::path& bin_path,
                 const std::filesystem::path& manifest_path, const Dataset& dataset);

/// Loads a cache pair written by write_cache. `name`/`split` label the result
/// (the binary format does not store them). Paths recorded in the manifest
/// must exist unless they use the synthetic:// scheme. Throws DataError on a
/// malformed file or a manifest/binary mismatch.
Dataset read_cache(const std::filesystem::path& bin_path,
                   const std::filesystem::path& manifest_path, const std::string& name,
                   Split split);

}  // namespace pcfl::data
