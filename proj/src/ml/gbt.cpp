#include "scan/ml/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "scan/util/error.hpp"
#include "scan/util/parallel.hpp"
#include "scan/util/rng.hpp"

namespace scan {

namespace gbt {

double Tree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    int idx = 0;
    while (nodes[idx].feature >= 0) {
        idx = row[nodes[idx].feature] < nodes[idx].threshold ? nodes[idx].left : nodes[idx].right;
    }
    return nodes[idx].value;
}

void Tree::save(BinaryWriter& w) const {
    w.put<std::uint64_t>(nodes.size());
    for (const auto& n : nodes) {
        w.put<std::int32_t>(n.feature);
        w.put<double>(n.threshold);
        w.put<std::int32_t>(n.left);
        w.put<std::int32_t>(n.right);
        w.put<double>(n.value);
    }
}

Tree Tree::load(BinaryReader& r) {
    Tree t;
    t.nodes.resize(r.get<std::uint64_t>());
    for (auto& n : t.nodes) {
        n.feature = r.get<std::int32_t>();
        n.threshold = r.get<double>();
        n.left = r.get<std::int32_t>();
        n.right = r.get<std::int32_t>();
        n.value = r.get<double>();
    }
    return t;
}

} // namespace gbt

namespace {

constexpr int kMaxBins = 256;

// Quantile-binned copy of the training matrix, column-major uint8.
// bin(x) = number of edges <= x, so "bin <= t" is exactly "x < edges[t]".
struct BinnedMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<std::vector<double>> edges;
    std::vector<std::uint8_t> bins;

    std::uint8_t bin(int f, int row) const { return bins[static_cast<std::size_t>(f) * n_rows + row]; }
};

BinnedMatrix bin_features(const Eigen::MatrixXd& x) {
    BinnedMatrix bm;
    bm.n_rows = static_cast<int>(x.rows());
    bm.n_cols = static_cast<int>(x.cols());
    bm.edges.resize(bm.n_cols);
    bm.bins.resize(static_cast<std::size_t>(bm.n_rows) * bm.n_cols);

    std::vector<double> sorted(bm.n_rows);
    for (int f = 0; f < bm.n_cols; ++f) {
        const double* col = x.col(f).data();
        std::copy(col, col + bm.n_rows, sorted.begin());
        std::sort(sorted.begin(), sorted.end());

        std::vector<double>& edges = bm.edges[f];
        int distinct = 1;
        for (int i = 1; i < bm.n_rows; ++i) {
            if (sorted[i] != sorted[i - 1]) ++distinct;
        }
        if (distinct <= kMaxBins) {
            for (int i = 1; i < bm.n_rows; ++i) {
                if (sorted[i] != sorted[i - 1]) {
                    double thr = 0.5 * (sorted[i - 1] + sorted[i]);
                    if (!(thr > sorted[i - 1])) thr = sorted[i];
                    edges.push_back(thr);
                }
            }
        } else {
            for (int j = 1; j < kMaxBins; ++j) {
                const int pos = static_cast<int>(
                    static_cast<long long>(j) * bm.n_rows / kMaxBins);
                if (pos <= 0 || pos >= bm.n_rows) continue;
                if (sorted[pos] == sorted[pos - 1]) continue;
                double thr = 0.5 * (sorted[pos - 1] + sorted[pos]);
                if (!(thr > sorted[pos - 1])) thr = sorted[pos];
                if (edges.empty() || thr > edges.back()) edges.push_back(thr);
            }
        }
        for (int i = 0; i < bm.n_rows; ++i) {
            const auto it = std::upper_bound(edges.begin(), edges.end(), col[i]);
            bm.bins[static_cast<std::size_t>(f) * bm.n_rows + i] =
                static_cast<std::uint8_t>(it - edges.begin());
        }
    }
    return bm;
}

struct HistEntry {
    float g;
    float h;
};
static_assert(std::is_trivial_v<HistEntry>);

struct TreeConfig {
    int max_depth = 6;
    double lambda = 1.0;
    double min_child_weight = 1.0;
    double leaf_scale = 0.3; // learning_rate / parallel_trees
    double col_subsample = 1.0;
};

// Builds one regression tree on binned features. Histograms are reused
// across the recursion: the smaller child is accumulated from its rows, the
// larger one derived by subtraction from the parent.
class TreeBuilder {
public:
    TreeBuilder(const BinnedMatrix& bm, const TreeConfig& cfg, const float* grad,
                const float* hess, Rng* rng)
        : bm_(bm), cfg_(cfg), grad_(grad), hess_(hess), rng_(rng) {
        pool_.resize(cfg.max_depth + 1);
        for (auto& buf : pool_) {
            buf.resize(static_cast<std::size_t>(bm_.n_cols) * kMaxBins);
        }
        feature_pool_.resize(bm_.n_cols);
    }

    gbt::Tree build(std::vector<int> rows) {
        tree_.nodes.clear();
        rows_ = std::move(rows);
        double g_total = 0.0, h_total = 0.0;
        accumulate(0, static_cast<int>(rows_.size()), pool_[0], &g_total, &h_total);
        tree_.nodes.emplace_back();
        grow(0, 0, static_cast<int>(rows_.size()), 0, 0, g_total, h_total);
        return std::move(tree_);
    }

private:
    void accumulate(int begin, int end, std::vector<HistEntry>& hist, double* g_total,
                    double* h_total) {
        double gs = 0.0, hs = 0.0;
        for (int f = 0; f < bm_.n_cols; ++f) {
            HistEntry* hf = hist.data() + static_cast<std::size_t>(f) * kMaxBins;
            std::memset(hf, 0, sizeof(HistEntry) * kMaxBins);
            const std::uint8_t* bins = bm_.bins.data() + static_cast<std::size_t>(f) * bm_.n_rows;
            for (int i = begin; i < end; ++i) {
                const int row = rows_[i];
                HistEntry& e = hf[bins[row]];
                e.g += grad_[row];
                e.h += hess_[row];
            }
        }
        for (int i = begin; i < end; ++i) {
            gs += grad_[rows_[i]];
            hs += hess_[rows_[i]];
        }
        *g_total = gs;
        *h_total = hs;
    }

    struct Split {
        bool found = false;
        int feature = -1;
        int bin = 0;
        double gain = 0.0;
    };

    Split find_split(const std::vector<HistEntry>& hist, double g_total, double h_total) {
        Split best;
        const double parent_score = g_total * g_total / (h_total + cfg_.lambda);

        int n_candidates = bm_.n_cols;
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
        if (cfg_.col_subsample < 1.0) {
            n_candidates = std::max(
                1, static_cast<int>(std::ceil(cfg_.col_subsample * bm_.n_cols)));
            for (int j = 0; j < n_candidates; ++j) {
                const int pick = j + static_cast<int>(rng_->uniform_int(bm_.n_cols - j));
                std::swap(feature_pool_[j], feature_pool_[pick]);
            }
            std::sort(feature_pool_.begin(), feature_pool_.begin() + n_candidates);
        }

        for (int fi = 0; fi < n_candidates; ++fi) {
            const int f = feature_pool_[fi];
            const int n_edges = static_cast<int>(bm_.edges[f].size());
            if (n_edges == 0) continue;
            const HistEntry* hf = hist.data() + static_cast<std::size_t>(f) * kMaxBins;
            double gl = 0.0, hl = 0.0;
            for (int b = 0; b < n_edges; ++b) {
                gl += hf[b].g;
                hl += hf[b].h;
                const double gr = g_total - gl;
                const double hr = h_total - hl;
                if (hl < cfg_.min_child_weight) continue;
                if (hr < cfg_.min_child_weight) break;
                const double gain = 0.5 * (gl * gl / (hl + cfg_.lambda) +
                                           gr * gr / (hr + cfg_.lambda) - parent_score);
                if (gain > best.gain) {
                    best.found = true;
                    best.gain = gain;
                    best.feature = f;
                    best.bin = b;
                }
            }
        }
        return best;
    }

    void make_leaf(int node, double g_total, double h_total) {
        tree_.nodes[node].feature = -1;
        tree_.nodes[node].value =
            -cfg_.leaf_scale * g_total / (h_total + cfg_.lambda);
    }

    void grow(int node, int begin, int end, int depth, int hist_idx, double g_total,
              double h_total) {
        if (depth >= cfg_.max_depth || end - begin < 2) {
            make_leaf(node, g_total, h_total);
            return;
        }
        const Split split = find_split(pool_[hist_idx], g_total, h_total);
        if (!split.found || !(split.gain > 0.0)) {
            make_leaf(node, g_total, h_total);
            return;
        }

        const std::uint8_t* bins =
            bm_.bins.data() + static_cast<std::size_t>(split.feature) * bm_.n_rows;
        const std::uint8_t t = static_cast<std::uint8_t>(split.bin);
        const auto mid_it = std::stable_partition(rows_.begin() + begin, rows_.begin() + end,
                                                  [&](int row) { return bins[row] <= t; });
        const int mid = static_cast<int>(mid_it - rows_.begin());

        const int left_id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        const int right_id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        {
            auto& n = tree_.nodes[node];
            n.feature = split.feature;
            n.threshold = bm_.edges[split.feature][split.bin];
            n.left = left_id;
            n.right = right_id;
        }

        const bool left_smaller = (mid - begin) <= (end - mid);
        const int child_hist = depth + 1;
        double gs, hs; // row-sum totals of the freshly accumulated child
        if (left_smaller) {
            accumulate(begin, mid, pool_[child_hist], &gs, &hs);
            subtract(pool_[hist_idx], pool_[child_hist]);
            grow(left_id, begin, mid, depth + 1, child_hist, gs, hs);
            grow(right_id, mid, end, depth + 1, hist_idx, g_total - gs, h_total - hs);
        } else {
            accumulate(mid, end, pool_[child_hist], &gs, &hs);
            subtract(pool_[hist_idx], pool_[child_hist]);
            grow(left_id, begin, mid, depth + 1, hist_idx, g_total - gs, h_total - hs);
            grow(right_id, mid, end, depth + 1, child_hist, gs, hs);
        }
    }

    // parent -= child, leaving the larger sibling's histogram in place
    void subtract(std::vector<HistEntry>& parent, const std::vector<HistEntry>& child) {
        for (std::size_t i = 0; i < parent.size(); ++i) {
            parent[i].g -= child[i].g;
            parent[i].h -= child[i].h;
        }
    }

    const BinnedMatrix& bm_;
    TreeConfig cfg_;
    const float* grad_;
    const float* hess_;
    Rng* rng_;
    std::vector<std::vector<HistEntry>> pool_;
    std::vector<int> feature_pool_;
    std::vector<int> rows_;
    gbt::Tree tree_;
};

} // namespace

void GradientBoostedTrees::do_fit(const Eigen::MatrixXd& x, const std::vector<int>& y,
                                  int threads) {
    const int n = static_cast<int>(x.rows());
    const int k_classes = n_classes_;
    const bool rf_mode = spec_.algorithm == Algorithm::gbt_random_forest;
    const int rounds = rf_mode ? 1 : spec_.gbt_rounds;
    const int parallel = rf_mode ? spec_.gbtrf_trees : 1;

    TreeConfig cfg;
    cfg.max_depth = spec_.gbt_max_depth;
    cfg.lambda = spec_.gbt_l2;
    cfg.min_child_weight = spec_.gbt_min_child_weight;
    cfg.leaf_scale = (rf_mode ? spec_.gbtrf_learning_rate : spec_.gbt_learning_rate) /
                     static_cast<double>(parallel);
    cfg.col_subsample = rf_mode ? spec_.gbtrf_col_subsample : 1.0;

    const BinnedMatrix bm = bin_features(x);

    Eigen::MatrixXd margins = Eigen::MatrixXd::Zero(n, k_classes);
    Eigen::MatrixXd proba(n, k_classes);
    Eigen::MatrixXf grad(n, k_classes), hess(n, k_classes);

    rounds_.clear();
    loss_curve_.clear();

    const auto update_proba_and_loss = [&] {
        double loss = 0.0;
        for (int i = 0; i < n; ++i) {
            const double m = margins.row(i).maxCoeff();
            double z = 0.0;
            for (int k = 0; k < k_classes; ++k) {
                proba(i, k) = std::exp(margins(i, k) - m);
                z += proba(i, k);
            }
            proba.row(i) /= z;
            loss -= std::log(std::max(proba(i, y[i]), 1e-300));
        }
        loss_curve_.push_back(loss / n);
    };
    update_proba_and_loss();

    for (int round = 0; round < rounds; ++round) {
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < k_classes; ++k) {
                const double p = proba(i, k);
                grad(i, k) = static_cast<float>(p - (y[i] == k ? 1.0 : 0.0));
                hess(i, k) = static_cast<float>(std::max(2.0 * p * (1.0 - p), 1e-16));
            }
        }
        std::vector<gbt::Tree> trees(static_cast<std::size_t>(k_classes) * parallel);
        parallel_for(trees.size(), threads, [&](std::size_t task) {
            const int k = static_cast<int>(task) / parallel;
            Rng rng(mix_seed(spec_.seed, 0x6762ULL + round, task));

            std::vector<int> rows;
            if (rf_mode && spec_.gbtrf_row_subsample < 1.0) {
                const int take = std::max(1, static_cast<int>(spec_.gbtrf_row_subsample * n));
                std::vector<int> all(n);
                std::iota(all.begin(), all.end(), 0);
                for (int j = 0; j < take; ++j) {
                    const int pick = j + static_cast<int>(rng.uniform_int(n - j));
                    std::swap(all[j], all[pick]);
                }
                rows.assign(all.begin(), all.begin() + take);
                std::sort(rows.begin(), rows.end());
            } else {
                rows.resize(n);
                std::iota(rows.begin(), rows.end(), 0);
            }

            Eigen::VectorXf g = grad.col(k);
            Eigen::VectorXf h = hess.col(k);
            TreeBuilder builder(bm, cfg, g.data(), h.data(), &rng);
            trees[task] = builder.build(std::move(rows));
        });

        // margins updated for every training row, after all trees of the round
        for (int k = 0; k < k_classes; ++k) {
            for (int t = 0; t < parallel; ++t) {
                const auto& tree = trees[static_cast<std::size_t>(k) * parallel + t];
                for (int i = 0; i < n; ++i) {
                    margins(i, k) += tree.predict(x.row(i));
                }
            }
        }
        rounds_.push_back(std::move(trees));
        update_proba_and_loss();
    }
}

Eigen::MatrixXd GradientBoostedTrees::do_predict_proba(const Eigen::MatrixXd& x,
                                                       int threads) const {
    const int k_classes = n_classes_;
    const bool rf_mode = spec_.algorithm == Algorithm::gbt_random_forest;
    const int parallel = rf_mode ? spec_.gbtrf_trees : 1;
    Eigen::MatrixXd proba(x.rows(), k_classes);
    parallel_for(x.rows(), threads, [&](std::size_t i) {
        Eigen::RowVectorXd margins = Eigen::RowVectorXd::Zero(k_classes);
        for (const auto& round : rounds_) {
            for (int k = 0; k < k_classes; ++k) {
                for (int t = 0; t < parallel; ++t) {
                    margins[k] += round[static_cast<std::size_t>(k) * parallel + t].predict(x.row(i));
                }
            }
        }
        const double m = margins.maxCoeff();
        double z = 0.0;
        for (int k = 0; k < k_classes; ++k) {
            proba(i, k) = std::exp(margins[k] - m);
            z += proba(i, k);
        }
        proba.row(i) /= z;
    });
    return proba;
}

void GradientBoostedTrees::save_state(BinaryWriter& w) const {
    w.put<std::uint64_t>(rounds_.size());
    for (const auto& round : rounds_) {
        w.put<std::uint64_t>(round.size());
        for (const auto& t : round) t.save(w);
    }
    w.put_vector(loss_curve_);
}

void GradientBoostedTrees::load_state(BinaryReader& r) {
    rounds_.resize(r.get<std::uint64_t>());
    for (auto& round : rounds_) {
        round.resize(r.get<std::uint64_t>());
        for (auto& t : round) t = gbt::Tree::load(r);
    }
    loss_curve_ = r.get_vector<double>();
}

} // namespace scan
