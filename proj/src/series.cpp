#include "lrdtest/series.hpp"

#include <algorithm>
#include <cmath>

namespace lrdtest {

Series::Series(std::vector<double> values) : values_(std::move(values)) {
    require_finite(values_, "Series");
}

Series::Series(std::initializer_list<double> values) : Series(std::vector<double>(values)) {}

void require_finite(std::span<const double> x, const char* what) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw std::invalid_argument(std::string(what) + ": non-finite value at position " +
                                        std::to_string(i + 1));
        }
    }
}

bool is_constant(std::span<const double> x) noexcept {
    if (x.empty()) return true;
    return std::all_of(x.begin(), x.end(), [first = x.front()](double v) { return v == first; });
}

}  // namespace lrdtest
