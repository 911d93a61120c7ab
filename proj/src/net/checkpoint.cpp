#include "pcfl/net/checkpoint.hpp"

#include <fstream>
#include <map>
#include <vector>

#include "pcfl/common.hpp"
#include "pcfl/io/binio.hpp"

namespace pcfl::net {

namespace {

constexpr char kMagic[4] = {'P', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

void write_tensor(std::ostream& os, const std::string& name, const Eigen::MatrixXd& m) {
    if (name.size() > 0xffff) throw Error("tensor name too long: " + name);
    io::write_u16(os, static_cast<std::uint16_t>(name.size()));
    io::write_bytes(os, name.data(), name.size());
    io::write_u32(os, static_cast<std::uint32_t>(m.rows()));
    io::write_u32(os, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            io::write_f32(os, static_cast<float>(m(i, j)));
}

Eigen::MatrixXd read_tensor(std::istream& is, std::string& name) {
    const std::uint16_t len = io::read_u16(is);
    name = io::read_string(is, len);
    const std::uint32_t rows = io::read_u32(is);
    const std::uint32_t cols = io::read_u32(is);
    Eigen::MatrixXd m(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
        for (std::uint32_t j = 0; j < cols; ++j) m(i, j) = io::read_f32(is);
    return m;
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ParamStore& store,
                     const AdamOptimizer* optimizer, const std::string& config_json,
                     std::uint64_t config_hash) {
    std::map<std::string, Eigen::MatrixXd> tensors;
    for (const auto& [name, value] : store.values()) tensors.emplace(name, value);
    for (const auto& [name, rs] : store.stats()) {
        tensors.emplace("stat." + name + ".mean", rs.mean.transpose());
        tensors.emplace("stat." + name + ".var", rs.var.transpose());
    }
    if (optimizer) {
        auto& opt = const_cast<AdamOptimizer&>(*optimizer);
        for (const auto& [name, m] : opt.first_moments()) tensors.emplace("adam.m." + name, m);
        for (const auto& [name, v] : opt.second_moments()) tensors.emplace("adam.v." + name, v);
    }

    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open checkpoint for writing: " + path.string());
    io::write_bytes(os, kMagic, 4);
    io::write_u32(os, kVersion);
    io::write_u64(os, static_cast<std::uint64_t>(store.step));
    io::write_u64(os, config_hash);
    io::write_u32(os, static_cast<std::uint32_t>(config_json.size()));
    io::write_bytes(os, config_json.data(), config_json.size());
    io::write_u32(os, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& [name, m] : tensors) write_tensor(os, name, m);
    if (!os) throw DataError("write failed for checkpoint: " + path.string());
}

CheckpointMeta load_checkpoint(const std::filesystem::path& path, ParamStore& store,
                               AdamOptimizer* optimizer) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open checkpoint: " + path.string());
    char magic[4];
    io::read_bytes(is, magic, 4);
    if (std::string(magic, 4) != std::string(kMagic, 4))
        throw DataError("not a checkpoint file: " + path.string());
    const std::uint32_t version = io::read_u32(is);
    if (version != kVersion)
        throw DataError("unsupported checkpoint version " + std::to_string(version));

    CheckpointMeta meta;
    meta.step = static_cast<std::int64_t>(io::read_u64(is));
    meta.config_hash = io::read_u64(is);
    const std::uint32_t config_len = io::read_u32(is);
    meta.config_json = io::read_string(is, config_len);

    const std::uint32_t n = io::read_u32(is);
    std::map<std::string, Eigen::VectorXd> stat_parts;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::string name;
        Eigen::MatrixXd m = read_tensor(is, name);
        if (starts_with(name, "stat.")) {
            stat_parts.emplace(name, m.transpose().col(0));
        } else if (starts_with(name, "adam.m.")) {
            if (optimizer) optimizer->first_moments()[name.substr(7)] = std::move(m);
        } else if (starts_with(name, "adam.v.")) {
            if (optimizer) optimizer->second_moments()[name.substr(7)] = std::move(m);
        } else {
            store.create(name, std::move(m));
        }
    }
    for (const auto& [key, vec] : stat_parts) {
        // key = "stat.<layer>.mean" or "stat.<layer>.var"
        const std::size_t dot = key.rfind('.');
        const std::string layer = key.substr(5, dot - 5);
        const std::string kind = key.substr(dot + 1);
        RunningStat& rs = store.stat(layer, vec.size());
        if (kind == "mean")
            rs.mean = vec;
        else if (kind == "var")
            rs.var = vec;
        else
            throw DataError("unknown running-stat tensor: " + key);
    }
    store.step = meta.step;
    return meta;
}

}  // namespace pcfl::net
