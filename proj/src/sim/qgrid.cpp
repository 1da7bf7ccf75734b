#include "scan/sim/qgrid.hpp"

#include <cmath>

#include "scan/util/error.hpp"

namespace scan {

QGrid QGrid::standard() {
    QGrid g;
    g.q_.resize(kPoints);
    const double lmin = std::log(kMin);
    const double lmax = std::log(kMax);
    for (int i = 0; i < kPoints; ++i) {
        g.q_[i] = std::exp(lmin + (lmax - lmin) * i / (kPoints - 1));
    }
    g.q_.front() = kMin;
    g.q_.back() = kMax;
    return g;
}

QGrid::QGrid(std::vector<double> values) : q_(std::move(values)) {
    if (q_.empty()) throw DataError("q grid is empty");
    double prev = 0.0;
    for (std::size_t i = 0; i < q_.size(); ++i) {
        if (!std::isfinite(q_[i]) || q_[i] <= prev) {
            throw DataError("q grid must be finite, positive and strictly increasing (point " +
                            std::to_string(i) + ")");
        }
        prev = q_[i];
    }
}

bool QGrid::matches(const QGrid& other) const {
    if (q_.size() != other.q_.size()) return false;
    for (std::size_t i = 0; i < q_.size(); ++i) {
        const double scale = std::fabs(q_[i]);
        if (std::fabs(q_[i] - other.q_[i]) > 1e-9 * scale) return false;
    }
    return true;
}

} // namespace scan
