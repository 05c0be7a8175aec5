#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ness {

/// Batch-means accumulator for a fixed-width vector of observables.
///
/// Samples are grouped into consecutive batches of `batch_length`; each
/// completed batch contributes one mean per observable. Incomplete trailing
/// batches are dropped. Accumulators from independent replicas merge by
/// concatenating their batch means.
class BatchMeans {
public:
    BatchMeans(std::size_t width, std::size_t batch_length)
        : width_(width), batch_length_(batch_length), partial_(width, 0.0) {
        if (batch_length == 0) throw std::invalid_argument("batch length must be positive");
    }

    void add(std::span<const double> sample) {
        if (sample.size() != width_) throw std::invalid_argument("sample width mismatch");
        for (std::size_t i = 0; i < width_; ++i) partial_[i] += sample[i];
        if (++filled_ == batch_length_) {
            const double inv = 1.0 / static_cast<double>(batch_length_);
            for (std::size_t i = 0; i < width_; ++i) {
                batches_.push_back(partial_[i] * inv);
                partial_[i] = 0.0;
            }
            filled_ = 0;
        }
    }

    void merge(const BatchMeans& other) {
        if (other.width_ != width_) throw std::invalid_argument("merging mismatched accumulators");
        batches_.insert(batches_.end(), other.batches_.begin(), other.batches_.end());
    }

    std::size_t width() const { return width_; }
    std::size_t batch_count() const { return width_ == 0 ? 0 : batches_.size() / width_; }

    double mean(std::size_t i) const;
    /// Standard error of the mean from the spread of batch means.
    double standard_error(std::size_t i) const;

private:
    std::size_t width_;
    std::size_t batch_length_;
    std::size_t filled_ = 0;
    std::vector<double> partial_;
    std::vector<double> batches_;  // batch-major: batch b, observable i at b*width_+i
};

/// Mean and standard error over independent samples, e.g. replicas.
struct SampleStats {
    double mean = 0.0;
    double se = 0.0;
};
SampleStats sample_stats(std::span<const double> xs);

/// Two-point Richardson extrapolation in 1/n assuming an error ~ n^{-order}.
double richardson(double n1, double v1, double n2, double v2, double order = 1.0);

}  // namespace ness
