#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pcfl/eval/features.hpp"
#include "pcfl/eval/probe.hpp"
#include "pcfl/net/trainer.hpp"

namespace pcfl::eval {

/// One probe evaluation, shaped like one row of the transfer tables.
struct ProbeResult {
    std::string stage;  // contrastnet | clusternet | untrained
    InputMode mode = InputMode::full;
    std::string train_dataset;
    std::string eval_dataset;
    int k_clusters = 0;  // 0 when no clustering stage is involved
    double C = 1.0;
    double accuracy = 0.0;
    std::uint64_t seed = 0;
    std::string checkpoint_id;
};

/// Accuracy of the probe on the eval table's rows, packaged with provenance.
/// Every row must be labeled.
ProbeResult evaluate_transfer(const LinearProbe& probe, const FeatureTable& eval_table,
                              const std::string& stage, InputMode mode,
                              const std::string& train_dataset, const std::string& eval_dataset,
                              int k_clusters, std::uint64_t seed,
                              const std::string& checkpoint_id);

/// CSV "stage,mode,train_ds,eval_ds,k_clusters,C,accuracy,seed,checkpoint_id"
/// prefixed with a "# config_hash=..." comment when the hash is nonempty.
void write_results_csv(const std::filesystem::path& path, const std::vector<ProbeResult>& rows,
                       const std::string& config_hash);

/// CSV "step,lr,loss,accuracy" (same comment convention).
void write_history_csv(const std::filesystem::path& path,
                       const std::vector<net::HistoryRow>& rows, const std::string& config_hash);

/// CSV "sample_id,x,y,label" holding 2-D plot coordinates.
void write_coords_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                      const Eigen::MatrixXd& coords, const std::vector<int>& labels,
                      const std::string& config_hash);

}  // namespace pcfl::eval
