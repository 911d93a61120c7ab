#include "pcfl/eval/reports.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "pcfl/common.hpp"

namespace pcfl::eval {

namespace {

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os << std::setprecision(precision) << std::fixed << v;
    return os.str();
}

std::ofstream open_csv(const std::filesystem::path& path, const std::string& config_hash) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open for writing: " + path.string());
    if (!config_hash.empty()) os << "# config_hash=" << config_hash << '\n';
    return os;
}

}  // namespace

ProbeResult evaluate_transfer(const LinearProbe& probe, const FeatureTable& eval_table,
                              const std::string& stage, InputMode mode,
                              const std::string& train_dataset, const std::string& eval_dataset,
                              int k_clusters, std::uint64_t seed,
                              const std::string& checkpoint_id) {
    for (int l : eval_table.labels)
        if (l < 0) throw DataError("evaluate_transfer: unlabeled sample in eval table");
    ProbeResult r;
    r.stage = stage;
    r.mode = mode;
    r.train_dataset = train_dataset;
    r.eval_dataset = eval_dataset;
    r.k_clusters = k_clusters;
    r.C = probe.C;
    r.accuracy = probe_accuracy(probe, eval_table.features, eval_table.labels);
    r.seed = seed;
    r.checkpoint_id = checkpoint_id;
    return r;
}

void write_results_csv(const std::filesystem::path& path, const std::vector<ProbeResult>& rows,
                       const std::string& config_hash) {
    auto os = open_csv(path, config_hash);
    os << "stage,mode,train_ds,eval_ds,k_clusters,C,accuracy,seed,checkpoint_id\n";
    for (const ProbeResult& r : rows) {
        os << r.stage << ',' << input_mode_name(r.mode) << ',' << r.train_dataset << ','
           << r.eval_dataset << ',' << r.k_clusters << ',' << fmt(r.C, 4) << ','
           << fmt(r.accuracy) << ',' << r.seed << ',' << r.checkpoint_id << '\n';
    }
    if (!os) throw DataError("write failed: " + path.string());
}

void write_history_csv(const std::filesystem::path& path,
                       const std::vector<net::HistoryRow>& rows, const std::string& config_hash) {
    auto os = open_csv(path, config_hash);
    os << "step,lr,loss,accuracy\n";
    for (const net::HistoryRow& r : rows)
        os << r.step << ',' << fmt(r.lr, 8) << ',' << fmt(r.loss) << ',' << fmt(r.accuracy)
           << '\n';
    if (!os) throw DataError("write failed: " + path.string());
}

void write_coords_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                      const Eigen::MatrixXd& coords, const std::vector<int>& labels,
                      const std::string& config_hash) {
    if (static_cast<std::size_t>(coords.rows()) != ids.size() || ids.size() != labels.size())
        throw DataError("coords CSV: size mismatch");
    auto os = open_csv(path, config_hash);
    os << "sample_id,x,y,label\n";
    for (std::size_t i = 0; i < ids.size(); ++i)
        os << ids[i] << ',' << fmt(coords(static_cast<Eigen::Index>(i), 0)) << ','
           << fmt(coords(static_cast<Eigen::Index>(i), 1)) << ',' << labels[i] << '\n';
    if (!os) throw DataError("write failed: " + path.string());
}

}  // namespace pcfl::eval
