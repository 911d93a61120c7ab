#include "pcfl/io/binio.hpp"

#include <bit>
#include <cstring>

#include "pcfl/common.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace pcfl::io {

namespace {
template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw DataError("unexpected end of binary stream");
    return v;
}
}  // namespace

void write_u16(std::ostream& os, std::uint16_t v) { put(os, v); }
void write_u32(std::ostream& os, std::uint32_t v) { put(os, v); }
void write_u64(std::ostream& os, std::uint64_t v) { put(os, v); }
void write_i32(std::ostream& os, std::int32_t v) { put(os, v); }
void write_f32(std::ostream& os, float v) { put(os, v); }
void write_bytes(std::ostream& os, const void* data, std::size_t n) {
    os.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

std::uint16_t read_u16(std::istream& is) { return get<std::uint16_t>(is); }
std::uint32_t read_u32(std::istream& is) { return get<std::uint32_t>(is); }
std::uint64_t read_u64(std::istream& is) { return get<std::uint64_t>(is); }
std::int32_t read_i32(std::istream& is) { return get<std::int32_t>(is); }
float read_f32(std::istream& is) { return get<float>(is); }

void read_bytes(std::istream& is, void* data, std::size_t n) {
    is.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (!is) throw DataError("unexpected end of binary stream");
}

std::string read_string(std::istream& is, std::size_t n) {
    std::string s(n, '\0');
    if (n) read_bytes(is, s.data(), n);
    return s;
}

}  // namespace pcfl::io
