#pragma once

#include <span>
#include <vector>

namespace newslens {

/// Exact running sum of doubles (Shewchuk's non-overlapping partials). The
/// rounded result is the correctly rounded value of the exact sum, so it does
/// not depend on the order the terms were added in.
class ExactSum {
   public:
    void add(double x);
    double value() const;

   private:
    std::vector<double> partials_;
};

double exact_sum(std::span<double const> values);

}  // namespace newslens
