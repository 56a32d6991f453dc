#include "relaxrd/detail/linsolve.hpp"

#include "relaxrd/error.hpp"

#include <cmath>
#include <utility>

namespace relaxrd::detail {

std::vector<long double> solve_dense(std::vector<long double> a, std::vector<long double> b)
{
    const std::size_t n = b.size();
    if (a.size() != n * n) {
        throw InvalidArgument("solve_dense: matrix/rhs size mismatch");
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r * n + col]) > std::fabs(a[pivot * n + col])) {
                pivot = r;
            }
        }
        if (a[pivot * n + col] == 0.0L) {
            throw InvalidArgument("solve_dense: singular moment system");
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a[col * n + c], a[pivot * n + c]);
            }
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = a[r * n + col] / a[col * n + col];
            if (f == 0.0L) {
                continue;
            }
            for (std::size_t c = col; c < n; ++c) {
                a[r * n + c] -= f * a[col * n + c];
            }
            b[r] -= f * b[col];
        }
    }
    std::vector<long double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        long double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) {
            s -= a[i * n + c] * x[c];
        }
        x[i] = s / a[i * n + i];
    }
    return x;
}

std::vector<double> moment_weights(const std::vector<std::vector<long double>>& moments,
                                   const std::vector<long double>& target)
{
    const std::size_t n = target.size();
    if (moments.size() != n) {
        throw InvalidArgument("moment_weights: need one functional per moment");
    }
    // Transposed system: row k collects functional_m(xi^k) over m.
    std::vector<long double> a(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t m = 0; m < n; ++m) {
            a[k * n + m] = moments[m].at(k);
        }
    }
    const auto x = solve_dense(std::move(a), target);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = static_cast<double>(x[i]);
    }
    return w;
}

} // namespace relaxrd::detail
