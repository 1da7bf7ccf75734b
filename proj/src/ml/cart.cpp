#include "scan/ml/cart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace scan::cart {

const std::vector<double>& Tree::leaf_distribution(
    const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    int idx = 0;
    while (nodes[idx].feature >= 0) {
        idx = row[nodes[idx].feature] < nodes[idx].threshold ? nodes[idx].left : nodes[idx].right;
    }
    return nodes[idx].distribution;
}

int Tree::vote(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    const auto& dist = leaf_distribution(row);
    int best = 0;
    for (int k = 1; k < static_cast<int>(dist.size()); ++k) {
        if (dist[k] > dist[best]) best = k;
    }
    return best;
}

void Tree::save(BinaryWriter& w) const {
    w.put<std::uint64_t>(nodes.size());
    for (const auto& n : nodes) {
        w.put<std::int32_t>(n.feature);
        w.put<double>(n.threshold);
        w.put<std::int32_t>(n.left);
        w.put<std::int32_t>(n.right);
        w.put_vector(n.distribution);
    }
}

Tree Tree::load(BinaryReader& r) {
    Tree t;
    const auto count = r.get<std::uint64_t>();
    t.nodes.resize(count);
    for (auto& n : t.nodes) {
        n.feature = r.get<std::int32_t>();
        n.threshold = r.get<double>();
        n.left = r.get<std::int32_t>();
        n.right = r.get<std::int32_t>();
        n.distribution = r.get_vector<double>();
    }
    return t;
}

namespace {

struct SortedSample {
    double value;
    int label;
    double weight;
};

struct SplitResult {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double cost = std::numeric_limits<double>::infinity(); // weighted child Gini sum
};

// Scratch shared across nodes of one grow_tree call.
struct Workspace {
    std::vector<SortedSample> sorted;
    std::vector<double> left_counts;
    std::vector<double> right_counts;
    std::vector<int> feature_pool;
};

double gini_from_counts(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double sumsq = 0.0;
    for (double c : counts) sumsq += c * c;
    return 1.0 - sumsq / (total * total);
}

SplitResult best_split(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
                       const std::vector<int>& indices, int begin, int end,
                       const GrowOptions& options, Workspace& ws) {
    const int n = end - begin;
    const Eigen::Index d = x.cols();

    ws.feature_pool.resize(d);
    std::iota(ws.feature_pool.begin(), ws.feature_pool.end(), 0);
    int n_candidates = static_cast<int>(d);
    if (options.features_per_split > 0 && options.features_per_split < d) {
        // partial Fisher-Yates draw, then ascending order so the
        // lowest-feature-index tie rule stays meaningful
        n_candidates = options.features_per_split;
        for (int j = 0; j < n_candidates; ++j) {
            const auto pick = j + static_cast<int>(options.rng->uniform_int(d - j));
            std::swap(ws.feature_pool[j], ws.feature_pool[pick]);
        }
        std::sort(ws.feature_pool.begin(), ws.feature_pool.begin() + n_candidates);
    }

    SplitResult best;
    ws.sorted.resize(n);
    for (int fi = 0; fi < n_candidates; ++fi) {
        const int f = ws.feature_pool[fi];
        const double* col = x.col(f).data();
        for (int i = 0; i < n; ++i) {
            const int row = indices[begin + i];
            ws.sorted[i] = {col[row], y[row],
                            options.sample_weights ? options.sample_weights[row] : 1.0};
        }
        std::sort(ws.sorted.begin(), ws.sorted.end(),
                  [](const SortedSample& a, const SortedSample& b) { return a.value < b.value; });
        if (ws.sorted.front().value == ws.sorted.back().value) continue;

        ws.left_counts.assign(n_classes, 0.0);
        ws.right_counts.assign(n_classes, 0.0);
        double left_total = 0.0, right_total = 0.0;
        for (const auto& s : ws.sorted) {
            ws.right_counts[s.label] += s.weight;
            right_total += s.weight;
        }
        for (int i = 0; i + 1 < n; ++i) {
            const auto& s = ws.sorted[i];
            ws.left_counts[s.label] += s.weight;
            left_total += s.weight;
            ws.right_counts[s.label] -= s.weight;
            right_total -= s.weight;
            if (s.value == ws.sorted[i + 1].value) continue;
            const double cost = left_total * gini_from_counts(ws.left_counts, left_total) +
                                right_total * gini_from_counts(ws.right_counts, right_total);
            if (cost < best.cost) {
                double thr = 0.5 * (s.value + ws.sorted[i + 1].value);
                if (!(thr > s.value)) thr = ws.sorted[i + 1].value;
                best.found = true;
                best.cost = cost;
                best.feature = f;
                best.threshold = thr;
            }
        }
    }
    return best;
}

} // namespace

Tree grow_tree(const Eigen::MatrixXd& x, const std::vector<int>& y, int n_classes,
               std::vector<int>& sample_indices, const GrowOptions& options) {
    Tree tree;
    Workspace ws;

    struct Task {
        int node;
        int begin;
        int end;
        int depth;
    };
    std::vector<Task> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, 0, static_cast<int>(sample_indices.size()), 0});

    std::vector<double> counts(n_classes);
    while (!stack.empty()) {
        const Task task = stack.back();
        stack.pop_back();

        std::fill(counts.begin(), counts.end(), 0.0);
        double total = 0.0;
        for (int i = task.begin; i < task.end; ++i) {
            const int row = sample_indices[i];
            const double w = options.sample_weights ? options.sample_weights[row] : 1.0;
            counts[y[row]] += w;
            total += w;
        }

        const bool pure = std::count_if(counts.begin(), counts.end(),
                                        [](double c) { return c > 0.0; }) <= 1;
        const bool depth_capped = options.max_depth >= 0 && task.depth >= options.max_depth;

        SplitResult split;
        if (!pure && !depth_capped && task.end - task.begin >= 2) {
            split = best_split(x, y, n_classes, sample_indices, task.begin, task.end, options, ws);
        }
        if (!split.found) {
            auto& leaf = tree.nodes[task.node];
            leaf.feature = -1;
            leaf.distribution.assign(counts.begin(), counts.end());
            if (total > 0.0) {
                for (double& c : leaf.distribution) c /= total;
            }
            continue;
        }

        const double* col = x.col(split.feature).data();
        auto mid_it = std::stable_partition(
            sample_indices.begin() + task.begin, sample_indices.begin() + task.end,
            [&](int row) { return col[row] < split.threshold; });
        const int mid = static_cast<int>(mid_it - sample_indices.begin());

        const int left_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        const int right_id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        auto& node = tree.nodes[task.node];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left_id;
        node.right = right_id;

        // right pushed first so the left subtree is grown first
        stack.push_back({right_id, mid, task.end, task.depth + 1});
        stack.push_back({left_id, task.begin, mid, task.depth + 1});
    }
    return tree;
}

} // namespace scan::cart
