#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace pcfl {

/// One object sample: N points, rows are (x, y, z).
struct PointCloud {
    Eigen::MatrixXd points;  // N x 3
    std::string source_id;
    int label = -1;  // optional category; evaluation-only, -1 = unlabeled

    Eigen::Index size() const { return points.rows(); }
};

enum class Split { train, test };

inline const char* split_name(Split s) { return s == Split::train ? "train" : "test"; }

struct ManifestEntry {
    std::string path;
    int label = -1;
    std::string source_id;
};

struct DatasetManifest {
    std::string name;
    Split split = Split::train;
    int sample_count = 0;
    int points_per_sample = 0;
    std::vector<ManifestEntry> entries;
};

/// A manifest together with its loaded clouds (entry i describes clouds[i]).
struct Dataset {
    DatasetManifest manifest;
    std::vector<PointCloud> clouds;
};

struct AugmentationConfig {
    bool rotate = true;        // random rotation about the gravity (z) axis
    double jitter_sigma = 0.01;
    double jitter_clip = 0.05;
    double shift_range = 0.1;
};

}  // namespace pcfl
