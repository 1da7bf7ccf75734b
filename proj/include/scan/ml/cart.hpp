#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "scan/util/binary_io.hpp"
#include "scan/util/rng.hpp"

namespace scan::cart {

/// One node of a CART tree. Leaves carry a class distribution; internal
/// nodes route on feature < threshold.
struct Node {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> distribution; // leaves only, sums to 1
};

struct Tree {
    std::vector<Node> nodes;

    const std::vector<double>& leaf_distribution(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
    /// Hard vote: argmax of the leaf distribution, lowest index on ties.
    int vote(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

    void save(BinaryWriter& w) const;
    static Tree load(BinaryReader& r);
};

struct GrowOptions {
    int max_depth = -1;          // -1: grow to purity
    int features_per_split = -1; // -1: consider every feature
    const double* sample_weights = nullptr;
    Rng* rng = nullptr; // required when features_per_split < D
};

/// Grows a tree by exhaustive Gini best-split search over the referenced
/// rows. `sample_indices` is consumed as scratch (partitioned in place).
/// Ties on split quality resolve to the lowest feature index, then lowest
/// threshold; majority votes resolve to the lowest class index.
Tree grow_tree(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
               std::vector<int>& sample_indices, const GrowOptions& options);

} // namespace scan::cart
