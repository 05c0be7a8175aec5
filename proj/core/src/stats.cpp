#include "ness/stats.hpp"

#include <cmath>

namespace ness {

double BatchMeans::mean(std::size_t i) const {
    const std::size_t nb = batch_count();
    if (nb == 0) return 0.0;
    double s = 0.0;
    for (std::size_t b = 0; b < nb; ++b) s += batches_[b * width_ + i];
    return s / static_cast<double>(nb);
}

double BatchMeans::standard_error(std::size_t i) const {
    const std::size_t nb = batch_count();
    if (nb < 2) return 0.0;
    const double mu = mean(i);
    double ss = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        const double d = batches_[b * width_ + i] - mu;
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(nb - 1) / static_cast<double>(nb));
}

SampleStats sample_stats(std::span<const double> xs) {
    SampleStats s;
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    s.mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return s;
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    return s;
}

double richardson(double n1, double v1, double n2, double v2, double order) {
    // v(n) = L + a n^{-order}; solve from two points.
    const double w1 = std::pow(n1, order);
    const double w2 = std::pow(n2, order);
    return (w2 * v2 - w1 * v1) / (w2 - w1);
}

}  // namespace ness
