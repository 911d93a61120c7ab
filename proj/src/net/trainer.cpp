#include "pcfl/net/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "pcfl/common.hpp"
#include "pcfl/data/sampling.hpp"

namespace pcfl::net {

namespace {

constexpr std::uint64_t kTagEpoch = 0xE70C;
constexpr std::uint64_t kTagEvalPairs = 0xE7A1;
constexpr std::uint64_t kTagHoldout = 0x801D;

Eigen::MatrixXd prepare_segment(const segment::Segment& seg, int n_points, bool recenter,
                                const AugmentationConfig* aug, Rng& rng) {
    segment::Segment s = segment::resample_segment(seg, n_points, rng());
    Eigen::MatrixXd pts = std::move(s.points);
    if (recenter) pts.rowwise() -= pts.colwise().mean().eval();
    if (aug) pts = data::augment_points(pts, *aug, rng);
    return pts;
}

void check_params_finite(const ParamStore& params, std::int64_t step) {
    for (const auto& [name, value] : params.values()) {
        if (!value.allFinite())
            throw NumericError("parameter '" + name + "' became non-finite at step " +
                               std::to_string(step));
    }
}

void check_loss(double loss, std::int64_t step) {
    if (!std::isfinite(loss))
        throw NumericError("training loss became non-finite at step " + std::to_string(step) +
                           " (loss=" + std::to_string(loss) + ")");
}

std::vector<int> range_vec(int begin, int end) {
    std::vector<int> v(static_cast<std::size_t>(end - begin));
    std::iota(v.begin(), v.end(), begin);
    return v;
}

}  // namespace

double pair_accuracy(ParamStore& params, const segment::PartDataset& parts,
                     const std::vector<segment::SegmentPair>& pairs, const EncoderConfig& enc,
                     const ContrastHeadConfig& head, int segment_points, bool recenter,
                     std::uint64_t seed, int batch_pairs) {
    if (pairs.empty()) throw DataError("pair_accuracy needs at least one pair");

    // Encode every referenced segment once, with a per-segment deterministic
    // resampling so repeated calls agree.
    std::vector<int> uniq;
    for (const auto& p : pairs) {
        uniq.push_back(p.a);
        uniq.push_back(p.b);
    }
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    std::map<int, Eigen::Index> emb_row;
    Eigen::MatrixXd embeddings;
    const int enc_batch = std::max(1, 2 * batch_pairs);
    for (std::size_t at = 0; at < uniq.size(); at += enc_batch) {
        const int b = static_cast<int>(std::min<std::size_t>(enc_batch, uniq.size() - at));
        Eigen::MatrixXd stacked(static_cast<Eigen::Index>(b) * segment_points, 3);
        for (int i = 0; i < b; ++i) {
            const int seg_idx = uniq[at + i];
            Rng rng = make_rng(seed, {static_cast<std::uint64_t>(seg_idx)});
            stacked.middleRows(static_cast<Eigen::Index>(i) * segment_points, segment_points) =
                prepare_segment(parts.segments[seg_idx], segment_points, recenter, nullptr, rng);
        }
        const Eigen::MatrixXd emb = encode_batch_eval(params, stacked, b, enc);
        if (embeddings.size() == 0) {
            embeddings.resize(static_cast<Eigen::Index>(uniq.size()), emb.cols());
        }
        for (int i = 0; i < b; ++i) {
            embeddings.row(static_cast<Eigen::Index>(at) + i) = emb.row(i);
            emb_row[uniq[at + i]] = static_cast<Eigen::Index>(at) + i;
        }
    }

    int correct = 0;
    for (std::size_t at = 0; at < pairs.size(); at += batch_pairs) {
        const int b = static_cast<int>(std::min<std::size_t>(batch_pairs, pairs.size() - at));
        Eigen::MatrixXd ea(b, embeddings.cols()), eb(b, embeddings.cols());
        for (int i = 0; i < b; ++i) {
            ea.row(i) = embeddings.row(emb_row.at(pairs[at + i].a));
            eb.row(i) = embeddings.row(emb_row.at(pairs[at + i].b));
        }
        ad::Tape tape;
        GraphContext ctx(tape, params);
        ctx.train = false;
        ad::Var logits =
            contrast_head(ctx, tape.constant(std::move(ea)), tape.constant(std::move(eb)), head);
        const Eigen::MatrixXd& l = tape.value(logits);
        for (int i = 0; i < b; ++i) {
            const int pred = l(i, 1) > l(i, 0) ? 1 : 0;
            if (pred == pairs[at + i].label) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

std::vector<HistoryRow> train_contrast(const segment::PartDataset& train_parts,
                                       const segment::PartDataset& eval_parts,
                                       ParamStore& params, AdamOptimizer& opt,
                                       const ContrastTrainOptions& opts) {
    const TrainConfig& tc = opts.train;
    if (tc.batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (tc.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (opts.pairs_per_epoch < 1) throw ConfigError("pairs_per_epoch must be >= 1");
    if (opts.segment_points <= opts.encoder.k_neighbors)
        throw ConfigError("segment_points must exceed encoder k_neighbors");
    if (train_parts.segments.empty()) throw DataError("empty part dataset");

    const std::vector<segment::SegmentPair> eval_pairs = segment::sample_pairs(
        eval_parts, opts.eval_pairs, 0.5, derive_seed(tc.seed, {kTagEvalPairs}));

    std::vector<HistoryRow> history;
    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        Rng rng = make_rng(tc.seed, {kTagEpoch, static_cast<std::uint64_t>(epoch)});
        const auto pairs =
            segment::sample_pairs(train_parts, opts.pairs_per_epoch, 0.5, rng());

        double loss_sum = 0.0;
        int n_batches = 0;
        for (std::size_t at = 0; at < pairs.size(); at += tc.batch_size) {
            const int b =
                static_cast<int>(std::min<std::size_t>(tc.batch_size, pairs.size() - at));
            const Eigen::Index rows_per = opts.segment_points;
            Eigen::MatrixXd stacked(2 * b * rows_per, 3);
            std::vector<int> labels(b);
            const AugmentationConfig* aug = opts.augment ? &opts.aug : nullptr;
            for (int i = 0; i < b; ++i) {
                const auto& pr = pairs[at + i];
                stacked.middleRows(static_cast<Eigen::Index>(i) * rows_per, rows_per) =
                    prepare_segment(train_parts.segments[pr.a], opts.segment_points,
                                    opts.recenter_segments, aug, rng);
                stacked.middleRows(static_cast<Eigen::Index>(b + i) * rows_per, rows_per) =
                    prepare_segment(train_parts.segments[pr.b], opts.segment_points,
                                    opts.recenter_segments, aug, rng);
                labels[i] = pr.label;
            }

            ad::Tape tape;
            GraphContext ctx(tape, params);
            ctx.train = true;
            ctx.dropout = tc.dropout;
            ctx.rng = &rng;
            ad::Var emb = encode_batch(ctx, stacked, 2 * b, opts.encoder);
            ad::Var emb_a = tape.gather_rows(emb, range_vec(0, b));
            ad::Var emb_b = tape.gather_rows(emb, range_vec(b, 2 * b));
            ad::Var logits = contrast_head(ctx, emb_a, emb_b, opts.head);
            ad::Var loss = tape.softmax_cross_entropy(logits, labels);
            tape.backward(loss);
            opt.step(ctx.gradients(), lr_at(params.step, tc));

            const double loss_val = tape.value(loss)(0, 0);
            check_loss(loss_val, params.step);
            if (opts.nan_check_every > 0 && params.step % opts.nan_check_every == 0)
                check_params_finite(params, params.step);
            loss_sum += loss_val;
            ++n_batches;
        }

        HistoryRow row;
        row.step = params.step;
        row.lr = lr_at(params.step, tc);
        row.loss = loss_sum / std::max(1, n_batches);
        row.accuracy =
            pair_accuracy(params, eval_parts, eval_pairs, opts.encoder, opts.head,
                          opts.segment_points, opts.recenter_segments, derive_seed(tc.seed, {kTagEvalPairs}));
        history.push_back(row);
        if (opts.on_epoch) opts.on_epoch(epoch, row);
    }
    return history;
}

std::vector<HistoryRow> train_cluster(const std::vector<Eigen::MatrixXd>& clouds,
                                      const std::vector<int>& pseudo_labels, ParamStore& params,
                                      AdamOptimizer& opt, const ClusterTrainOptions& opts) {
    const TrainConfig& tc = opts.train;
    if (clouds.size() != pseudo_labels.size())
        throw DataError("clouds/pseudo_labels size mismatch");
    if (clouds.empty()) throw DataError("empty training set");
    if (tc.batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (tc.epochs < 1) throw ConfigError("epochs must be >= 1");
    const Eigen::Index n_pts = clouds.front().rows();
    for (const auto& c : clouds)
        if (c.rows() != n_pts) throw DataError("cluster training requires uniform cloud sizes");
    if (n_pts <= opts.encoder.k_neighbors)
        throw ConfigError("cloud size must exceed encoder k_neighbors");
    for (int l : pseudo_labels)
        if (l < 0 || l >= opts.head.n_clusters)
            throw DataError("pseudo-label " + std::to_string(l) + " outside [0, " +
                            std::to_string(opts.head.n_clusters) + ")");

    // Carve a holdout once for the per-epoch accuracy signal.
    std::vector<int> order = range_vec(0, static_cast<int>(clouds.size()));
    {
        Rng rng = make_rng(tc.seed, {kTagHoldout});
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[uniform_index(rng, i)]);
    }
    int n_hold = 0;
    if (opts.holdout_fraction > 0 && clouds.size() >= 2) {
        n_hold = std::max(1, static_cast<int>(std::lround(opts.holdout_fraction *
                                                          static_cast<double>(clouds.size()))));
        n_hold = std::min<int>(n_hold, static_cast<int>(clouds.size()) - 1);
    }
    const std::vector<int> holdout(order.begin(), order.begin() + n_hold);
    const std::vector<int> train_idx(order.begin() + n_hold, order.end());

    auto eval_accuracy = [&](const std::vector<int>& idx) {
        const std::vector<int>& use = idx.empty() ? train_idx : idx;
        int correct = 0;
        const int eb = std::max(1, tc.batch_size);
        for (std::size_t at = 0; at < use.size(); at += eb) {
            const int b = static_cast<int>(std::min<std::size_t>(eb, use.size() - at));
            Eigen::MatrixXd stacked(b * n_pts, 3);
            for (int i = 0; i < b; ++i)
                stacked.middleRows(static_cast<Eigen::Index>(i) * n_pts, n_pts) =
                    clouds[use[at + i]];
            ad::Tape tape;
            GraphContext ctx(tape, params);
            ctx.train = false;
            ad::Var emb = encode_batch(ctx, stacked, b, opts.encoder);
            ad::Var logits = cluster_head(ctx, emb, opts.head);
            const Eigen::MatrixXd& l = tape.value(logits);
            for (int i = 0; i < b; ++i) {
                Eigen::Index pred;
                l.row(i).maxCoeff(&pred);
                if (static_cast<int>(pred) == pseudo_labels[use[at + i]]) ++correct;
            }
        }
        return static_cast<double>(correct) / static_cast<double>(use.size());
    };

    std::vector<HistoryRow> history;
    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        Rng rng = make_rng(tc.seed, {kTagEpoch, static_cast<std::uint64_t>(epoch)});
        std::vector<int> sched = train_idx;
        for (std::size_t i = sched.size(); i > 1; --i)
            std::swap(sched[i - 1], sched[uniform_index(rng, i)]);

        double loss_sum = 0.0;
        int n_batches = 0;
        for (std::size_t at = 0; at < sched.size(); at += tc.batch_size) {
            const int b =
                static_cast<int>(std::min<std::size_t>(tc.batch_size, sched.size() - at));
            Eigen::MatrixXd stacked(b * n_pts, 3);
            std::vector<int> labels(b);
            for (int i = 0; i < b; ++i) {
                Eigen::MatrixXd pts = clouds[sched[at + i]];
                if (opts.augment) pts = data::augment_points(pts, opts.aug, rng);
                stacked.middleRows(static_cast<Eigen::Index>(i) * n_pts, n_pts) = pts;
                labels[i] = pseudo_labels[sched[at + i]];
            }

            ad::Tape tape;
            GraphContext ctx(tape, params);
            ctx.train = true;
            ctx.dropout = tc.dropout;
            ctx.rng = &rng;
            ad::Var emb = encode_batch(ctx, stacked, b, opts.encoder);
            ad::Var logits = cluster_head(ctx, emb, opts.head);
            ad::Var loss = tape.softmax_cross_entropy(logits, labels);
            tape.backward(loss);
            opt.step(ctx.gradients(), lr_at(params.step, tc));

            const double loss_val = tape.value(loss)(0, 0);
            check_loss(loss_val, params.step);
            if (opts.nan_check_every > 0 && params.step % opts.nan_check_every == 0)
                check_params_finite(params, params.step);
            loss_sum += loss_val;
            ++n_batches;
        }

        HistoryRow row;
        row.step = params.step;
        row.lr = lr_at(params.step, tc);
        row.loss = loss_sum / std::max(1, n_batches);
        row.accuracy = eval_accuracy(holdout);
        history.push_back(row);
        if (opts.on_epoch) opts.on_epoch(epoch, row);
    }
    return history;
}

}  // namespace pcfl::net
