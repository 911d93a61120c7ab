#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

namespace pcfl::io {

// Little-endian scalar serialization shared by the binary file formats
// (point-cloud cache, checkpoints, centroid tables).

void write_u16(std::ostream& os, std::uint16_t v);
void write_u32(std::ostream& os, std::uint32_t v);
void write_u64(std::ostream& os, std::uint64_t v);
void write_i32(std::ostream& os, std::int32_t v);
void write_f32(std::ostream& os, float v);
void write_bytes(std::ostream& os, const void* data, std::size_t n);

std::uint16_t read_u16(std::istream& is);
std::uint32_t read_u32(std::istream& is);
std::uint64_t read_u64(std::istream& is);
std::int32_t read_i32(std::istream& is);
float read_f32(std::istream& is);
/// Throws DataError on short read.
void read_bytes(std::istream& is, void* data, std::size_t n);
std::string read_string(std::istream& is, std::size_t n);

}  // namespace pcfl::io
