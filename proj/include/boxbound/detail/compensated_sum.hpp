#pragma once

#include <cmath>

namespace boxbound::detail {

// Neumaier's variant of Kahan summation. Order-dependent, so callers that need
// reproducibility must feed terms in a fixed order.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace boxbound::detail
