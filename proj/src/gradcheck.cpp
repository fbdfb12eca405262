#include "latentforge/gradcheck.hpp"

#include "latentforge/errors.hpp"

#include <algorithm>
#include <cmath>

namespace latentforge {

double grad_check(const DiffFunction& fn, std::span<const double> params, double h) {
    std::vector<double> p(params.begin(), params.end());
    const std::vector<double> analytic = fn.gradient(p);
    if (analytic.size() != p.size())
        throw NumericFailure("grad_check: gradient length mismatch");

    double worst = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double orig = p[i];
        p[i] = orig + h;
        const double fp = fn.value(p);
        p[i] = orig - h;
        const double fm = fn.value(p);
        p[i] = orig;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NumericFailure("grad_check: non-finite loss at perturbed parameters");
        const double numeric = (fp - fm) / (2.0 * h);
        const double a = analytic[i];
        const double denom = std::max({1.0, std::abs(a), std::abs(numeric)});
        worst = std::max(worst, std::abs(a - numeric) / denom);
    }
    return worst;
}

} // namespace latentforge
