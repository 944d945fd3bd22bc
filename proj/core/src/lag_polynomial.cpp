#include "hfentropy/lag_polynomial.hpp"

#include <cmath>
#include <vector>

namespace hfentropy {

bool is_stationary(std::span<const double> ar) {
    std::vector<double> a(ar.begin(), ar.end());
    while (!a.empty() && a.back() == 0.0) a.pop_back();
    for (std::size_t k = a.size(); k > 0; --k) {
        const double r = a[k - 1];
        if (!std::isfinite(r) || std::abs(r) >= 1.0) {
            return false;
        }
        const double denom = 1.0 - r * r;
        std::vector<double> b(k - 1);
        for (std::size_t j = 0; j + 1 < k; ++j) {
            b[j] = (a[j] + r * a[k - 2 - j]) / denom;
        }
        a = std::move(b);
    }
    return true;
}

bool is_invertible(std::span<const double> ma) {
    std::vector<double> negated(ma.size());
    for (std::size_t i = 0; i < ma.size(); ++i) negated[i] = -ma[i];
    return is_stationary(negated);
}

}  // namespace hfentropy
