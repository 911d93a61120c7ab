#include "pcfl/data/cache.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pcfl/common.hpp"
#include "pcfl/io/binio.hpp"

namespace pcfl::data {

namespace {
constexpr char kMagic[4] = {'P', 'C', 'L', 'B'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_cache(const std::filesystem::path& bin_path,
                 const std::filesystem::path& manifest_path, const Dataset& dataset) {
    const int n = static_cast<int>(dataset.clouds.size());
    if (n != dataset.manifest.sample_count || n != static_cast<int>(dataset.manifest.entries.size()))
        throw DataError("dataset manifest/cloud count mismatch");
    const int ppc = dataset.manifest.points_per_sample;
    for (const PointCloud& c : dataset.clouds)
        if (c.size() != ppc) throw DataError("cache requires uniform points_per_sample");

    std::ofstream os(bin_path, std::ios::binary);
    if (!os) throw DataError("cannot open cache for writing: " + bin_path.string());
    io::write_bytes(os, kMagic, 4);
    io::write_u32(os, kVersion);
    io::write_u32(os, static_cast<std::uint32_t>(n));
    io::write_u32(os, static_cast<std::uint32_t>(ppc));
    for (const PointCloud& c : dataset.clouds) {
        io::write_i32(os, c.label);
        if (c.source_id.size() > 0xffff) throw DataError("source_id too long: " + c.source_id);
        io::write_u16(os, static_cast<std::uint16_t>(c.source_id.size()));
        io::write_bytes(os, c.source_id.data(), c.source_id.size());
        for (int p = 0; p < ppc; ++p)
            for (int d = 0; d < 3; ++d) io::write_f32(os, static_cast<float>(c.points(p, d)));
    }
    if (!os) throw DataError("write failed for cache: " + bin_path.string());

    std::ofstream ms(manifest_path);
    if (!ms) throw DataError("cannot open manifest for writing: " + manifest_path.string());
    for (const ManifestEntry& e : dataset.manifest.entries)
        ms << e.path << '\t' << e.label << '\t' << e.source_id << '\n';
    if (!ms) throw DataError("write failed for manifest: " + manifest_path.string());
}

Dataset read_cache(const std::filesystem::path& bin_path,
                   const std::filesystem::path& manifest_path, const std::string& name,
                   Split split) {
    std::ifstream is(bin_path, std::ios::binary);
    if (!is) throw DataError("cannot open cache: " + bin_path.string());
    char magic[4];
    io::read_bytes(is, magic, 4);
    if (std::string(magic, 4) != std::string(kMagic, 4))
        throw DataError("not a point-cloud cache: " + bin_path.string());
    const std::uint32_t version = io::read_u32(is);
    if (version != kVersion)
        throw DataError("unsupported cache version " + std::to_string(version));
    const std::uint32_t n = io::read_u32(is);
    const std::uint32_t ppc = io::read_u32(is);
    if (ppc == 0) throw DataError("cache has zero points_per_sample");

    Dataset ds;
    ds.manifest.name = name;
    ds.manifest.split = split;
    ds.manifest.sample_count = static_cast<int>(n);
    ds.manifest.points_per_sample = static_cast<int>(ppc);
    ds.clouds.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        PointCloud c;
        c.label = io::read_i32(is);
        const std::uint16_t len = io::read_u16(is);
        c.source_id = io::read_string(is, len);
        c.points.resize(ppc, 3);
        for (std::uint32_t p = 0; p < ppc; ++p)
            for (int d = 0; d < 3; ++d) {
                const float v = io::read_f32(is);
                if (!std::isfinite(v))
                    throw DataError("non-finite coordinate in cache sample " + std::to_string(i));
                c.points(p, d) = v;
            }
        ds.clouds.push_back(std::move(c));
    }

    std::ifstream ms(manifest_path);
    if (!ms) throw DataError("cannot open manifest: " + manifest_path.string());
    std::string line;
    std::size_t row = 0;
    while (std::getline(ms, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ManifestEntry e;
        std::string label_tok;
        if (!std::getline(ls, e.path, '\t') || !std::getline(ls, label_tok, '\t') ||
            !std::getline(ls, e.source_id))
            throw DataError("malformed manifest line " + std::to_string(row + 1) + " in " +
                            manifest_path.string());
        e.label = std::stoi(label_tok);
        if (e.path.rfind("synthetic://", 0) != 0 && !std::filesystem::exists(e.path))
            throw DataError("manifest references missing file: " + e.path);
        ds.manifest.entries.push_back(std::move(e));
        ++row;
    }
    if (ds.manifest.entries.size() != n)
        throw DataError("manifest entry count (" + std::to_string(ds.manifest.entries.size()) +
                        ") does not match cache sample count (" + std::to_string(n) + ")");
    for (std::uint32_t i = 0; i < n; ++i) {
        if (ds.manifest.entries[i].source_id != ds.clouds[i].source_id)
            throw DataError("manifest/cache source_id mismatch at row " + std::to_string(i));
    }
    return ds;
}

}  // namespace pcfl::data
