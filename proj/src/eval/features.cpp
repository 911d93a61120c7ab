#include "pcfl/eval/features.hpp"

#include <cmath>
#include <optional>

#include "pcfl/common.hpp"
#include "pcfl/segment/parts.hpp"
#include "pcfl/segment/visibility.hpp"

namespace pcfl::eval {

const char* input_mode_name(InputMode mode) {
    switch (mode) {
        case InputMode::full: return "full";
        case InputMode::part: return "part";
        case InputMode::perspective: return "perspective";
    }
    return "?";
}

InputMode parse_input_mode(const std::string& name) {
    if (name == "full") return InputMode::full;
    if (name == "part") return InputMode::part;
    if (name == "perspective") return InputMode::perspective;
    throw ConfigError("unknown input mode '" + name + "' (expected full|part|perspective)");
}

namespace {

/// One partial observation of a cloud, or nothing after max_retries.
std::optional<Eigen::MatrixXd> partial_input(const PointCloud& cloud, const ExtractOptions& opts,
                                             std::uint64_t sample_seed, std::string* why) {
    for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
        const std::uint64_t s = derive_seed(sample_seed, {static_cast<std::uint64_t>(attempt)});
        segment::Segment seg;
        if (opts.mode == InputMode::part) {
            const auto planes = segment::generate_cut_planes(cloud.points, 1, s);
            auto [a, b] = segment::cut_object(cloud.points, cloud.source_id, planes[0]);
            const bool a_ok = a.points.rows() >= opts.min_points;
            const bool b_ok = b.points.rows() >= opts.min_points;
            if (!a_ok && !b_ok) continue;
            if (a_ok && b_ok) {
                Rng pick = make_rng(s, {0xAB});
                seg = (uniform_index(pick, 2) == 0) ? std::move(a) : std::move(b);
            } else {
                seg = a_ok ? std::move(a) : std::move(b);
            }
        } else {  // perspective
            Rng dir_rng = make_rng(s, {0xD1});
            std::normal_distribution<double> g(0.0, 1.0);
            Eigen::Vector3d dir(g(dir_rng), g(dir_rng), g(dir_rng));
            while (dir.norm() < 1e-9) dir = Eigen::Vector3d(g(dir_rng), g(dir_rng), g(dir_rng));
            dir.normalize();
            seg = segment::simulate_perspective_view(cloud.points, cloud.source_id, dir, s);
            if (seg.points.rows() < opts.min_view_points) continue;
        }
        seg = segment::resample_segment(seg, opts.segment_points, derive_seed(s, {0x5A}));
        Eigen::MatrixXd pts = std::move(seg.points);
        if (opts.recenter) pts.rowwise() -= pts.colwise().mean().eval();
        return pts;
    }
    if (why)
        *why = std::string(input_mode_name(opts.mode)) + " input failed after " +
               std::to_string(opts.max_retries) + " retries";
    return std::nullopt;
}

}  // namespace

FeatureTable extract_features(const Dataset& dataset, net::ParamStore& params,
                              const ExtractOptions& opts) {
    if (dataset.clouds.empty()) throw DataError("extract_features: empty dataset");
    const int rows_per = opts.mode == InputMode::full
                             ? static_cast<int>(dataset.clouds.front().size())
                             : opts.segment_points;
    if (rows_per <= opts.encoder.k_neighbors)
        throw ConfigError("extract_features: input size must exceed encoder k_neighbors");

    FeatureTable table;
    table.split = dataset.manifest.split;

    // Materialize the network input of every usable sample.
    std::vector<Eigen::MatrixXd> inputs;
    for (std::size_t i = 0; i < dataset.clouds.size(); ++i) {
        const PointCloud& cloud = dataset.clouds[i];
        if (opts.mode == InputMode::full) {
            if (cloud.size() != rows_per)
                throw DataError("extract_features: nonuniform cloud sizes in full mode");
            inputs.push_back(cloud.points);
        } else {
            std::string why;
            auto pts = partial_input(cloud, opts, derive_seed(opts.seed, {i}), &why);
            if (!pts) {
                table.warnings.push_back("sample '" + cloud.source_id + "' skipped: " + why);
                continue;
            }
            inputs.push_back(std::move(*pts));
        }
        table.sample_ids.push_back(cloud.source_id);
        table.labels.push_back(cloud.label);
    }
    if (inputs.empty()) throw DataError("extract_features: every sample was skipped");

    const int batch = std::max(1, opts.batch_clouds);
    for (std::size_t at = 0; at < inputs.size(); at += batch) {
        const int b = static_cast<int>(std::min<std::size_t>(batch, inputs.size() - at));
        Eigen::MatrixXd stacked(static_cast<Eigen::Index>(b) * rows_per, 3);
        for (int i = 0; i < b; ++i)
            stacked.middleRows(static_cast<Eigen::Index>(i) * rows_per, rows_per) = inputs[at + i];
        const Eigen::MatrixXd emb = net::encode_batch_eval(params, stacked, b, opts.encoder);
        if (table.features.size() == 0)
            table.features.resize(static_cast<Eigen::Index>(inputs.size()), emb.cols());
        table.features.middleRows(static_cast<Eigen::Index>(at), b) = emb;
    }
    return table;
}

}  // namespace pcfl::eval
