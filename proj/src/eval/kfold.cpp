#include "scan/eval/kfold.hpp"

#include <algorithm>
#include <stdexcept>

#include "scan/util/error.hpp"
#include "scan/util/rng.hpp"

namespace scan {

std::vector<std::vector<int>> kfold_split(const std::vector<int>& labels, int k,
                                          std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    const int n = static_cast<int>(labels.size());
    if (n < k) throw std::invalid_argument("need at least k samples");

    int n_classes = 0;
    for (int l : labels) {
        if (l < 0) throw DataError("negative label");
        n_classes = std::max(n_classes, l + 1);
    }
    std::vector<std::vector<int>> by_class(n_classes);
    for (int i = 0; i < n; ++i) by_class[labels[i]].push_back(i);

    Rng rng(mix_seed(seed, 0x666f6c64ULL));
    std::vector<std::vector<int>> folds(k);
    for (int c = 0; c < n_classes; ++c) {
        auto& members = by_class[c];
        if (members.empty()) continue;
        if (static_cast<int>(members.size()) < k) {
            throw DataError("class " + std::to_string(c) + " has " +
                            std::to_string(members.size()) + " samples, fewer than k=" +
                            std::to_string(k));
        }
        rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i) {
            folds[i % k].push_back(members[i]);
        }
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

} // namespace scan
