#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrdtest {

// Data-dependent failures. Precondition violations on arguments are reported
// with std::invalid_argument instead.
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A segment is too short for the requested estimator (e.g. fewer than two
// subsampling blocks).
class DegenerateSegmentError : public DegenerateDataError {
public:
    using DegenerateDataError::DegenerateDataError;
};

// A scale or variance estimate that must be positive came out as zero.
class ZeroScaleError : public DegenerateDataError {
public:
    using DegenerateDataError::DegenerateDataError;
};

// An ordered sample of finite observations.
class Series {
public:
    Series() = default;
    explicit Series(std::vector<double> values);
    Series(std::initializer_list<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] std::span<const double> view() const noexcept { return values_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    // 1-based access, matching the indexing used in the formulas.
    [[nodiscard]] double at1(std::size_t i) const { return values_.at(i - 1); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    operator std::span<const double>() const noexcept { return values_; }

    // Releases the storage without re-checking on the way out.
    [[nodiscard]] std::vector<double> release() && noexcept { return std::move(values_); }

private:
    std::vector<double> values_;
};

// Throws std::invalid_argument naming the first non-finite position (1-based).
void require_finite(std::span<const double> x, const char* what);

[[nodiscard]] bool is_constant(std::span<const double> x) noexcept;

}  // namespace lrdtest
