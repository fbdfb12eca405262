#pragma once

#include <functional>
#include <span>
#include <vector>

namespace latentforge {

// A scalar function of a flat parameter vector together with its analytic
// gradient, in the form gradient-based checks need.
struct DiffFunction {
    std::function<double(std::span<const double>)> value;
    std::function<std::vector<double>(std::span<const double>)> gradient;
};

// Compares the analytic gradient against central finite differences
// (f(p+h) - f(p-h)) / 2h and returns the worst relative error
// |a - n| / max(1, |a|, |n|). Throws NumericFailure on non-finite values.
double grad_check(const DiffFunction& fn, std::span<const double> params, double h = 1e-5);

} // namespace latentforge
