#include "newslens/fsum.hpp"

#include <cmath>

namespace newslens {

void ExactSum::add(double x)
{
    std::size_t i = 0;
    for (double y : partials_) {
        if (std::abs(x) < std::abs(y)) {
            std::swap(x, y);
        }
        double const hi = x + y;
        double const lo = y - (hi - x);
        if (lo != 0.0) {
            partials_[i++] = lo;
        }
        x = hi;
    }
    partials_.resize(i);
    partials_.push_back(x);
}

double ExactSum::value() const
{
    std::size_t n = partials_.size();
    if (n == 0) {
        return 0.0;
    }
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
        double const x = hi;
        double const y = partials_[--n];
        hi = x + y;
        lo = y - (hi - x);
        if (lo != 0.0) {
            break;
        }
    }
    // round half to even across the remaining partials
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
        double const y = lo * 2.0;
        double const x = hi + y;
        if (y == x - hi) {
            hi = x;
        }
    }
    return hi;
}

double exact_sum(std::span<double const> values)
{
    ExactSum s;
    for (double v : values) {
        s.add(v);
    }
    return s.value();
}

}  // namespace newslens
