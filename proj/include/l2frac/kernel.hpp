#pragma once

// Discrete Caputo operators on uniform and nonuniform time grids: the
// L2 weights c_s built from the a_l / b_l coefficients, the L1 formula
// used for the first layer, the power-law oracle and the energy
// quantities that appear in the stability estimates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "l2frac/gamma.hpp"

namespace l2frac {

/// Fractional order alpha in (0, 1) together with Gamma(1 - alpha) and
/// Gamma(2 - alpha).
class AlphaParam {
public:
    explicit AlphaParam(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw std::invalid_argument("alpha must lie in the open interval (0, 1), got " +
                                        std::to_string(alpha));
        }
        gamma_1ma_ = gamma_fn(1.0 - alpha);
        gamma_2ma_ = gamma_fn(2.0 - alpha);
    }

    double value() const noexcept { return alpha_; }
    double gamma_1ma() const noexcept { return gamma_1ma_; }
    double gamma_2ma() const noexcept { return gamma_2ma_; }

    /// tau^{-alpha} / Gamma(2 - alpha), the prefactor of both L1 and L2 sums.
    double scale(double tau) const { return std::pow(tau, -alpha_) / gamma_2ma_; }

private:
    double alpha_;
    double gamma_1ma_;
    double gamma_2ma_;
};

namespace detail {

// Above these indices the closed forms lose too many digits to cancellation.
// b_l loses about l^3 ulps, a_l only about l.
inline constexpr std::size_t kLargeIndex = 1'000'000;
inline constexpr std::size_t kSeriesIndexB = 8;

}  // namespace detail

/// a_l = (l+1)^{1-alpha} - l^{1-alpha}
inline double a_coeff(std::size_t l, const AlphaParam& alpha) {
    const double p = 1.0 - alpha.value();
    const double x = static_cast<double>(l);
    if (l <= detail::kLargeIndex) {
        return std::pow(x + 1.0, p) - std::pow(x, p);
    }
    return std::pow(x, p) * std::expm1(p * std::log1p(1.0 / x));
}

/// b_l = [(l+1)^{2-alpha} - l^{2-alpha}]/(2-alpha) - [(l+1)^{1-alpha} + l^{1-alpha}]/2
inline double b_coeff(std::size_t l, const AlphaParam& alpha) {
    const double q = 1.0 - alpha.value();
    const double x = static_cast<double>(l);
    if (l < detail::kSeriesIndexB) {
        return (std::pow(x + 1.0, q + 1.0) - std::pow(x, q + 1.0)) / (q + 1.0) -
               0.5 * (std::pow(x + 1.0, q) + std::pow(x, q));
    }
    // b_l = l^q * sum_{m>=2} binom(q, m) (1 - m) / (2 (m + 1)) * l^{-m}
    const double inv = 1.0 / x;
    double binom = q;  // binom(q, 1)
    double power = inv;
    double sum = 0.0;
    for (int m = 2; m < 40; ++m) {
        binom *= (q - m + 1) / m;
        power *= inv;
        const double term = binom * (1.0 - m) / (2.0 * (m + 1)) * power;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) {
            break;
        }
    }
    return std::pow(x, q) * sum;
}

/// Weights of the L2 formula at time level j (the derivative at t_{j+1}).
/// c[s] multiplies the forward difference u_{j-s+1} - u_{j-s}.
struct L2Weights {
    std::size_t level = 0;
    std::vector<double> c;

    double operator[](std::size_t s) const { return c[s]; }
    std::size_t size() const noexcept { return c.size(); }
};

inline L2Weights c_weights(std::size_t j, const AlphaParam& alpha) {
    if (j == 0) {
        throw std::invalid_argument(
            "c_weights: level j must be >= 1; the first layer uses the L1 formula");
    }
    std::vector<double> a(j + 1);
    std::vector<double> b(j + 1);
    for (std::size_t l = 0; l <= j; ++l) {
        a[l] = a_coeff(l, alpha);
        b[l] = b_coeff(l, alpha);
    }

    std::vector<double> c(j + 1);
    if (j == 1) {
        c[0] = a[0] + b[0] + b[1];
        c[1] = a[1] - b[1] - b[0];
    } else if (j == 2) {
        c[0] = a[0] + b[0];
        c[1] = a[1] + b[1] + b[2] - b[0];
        c[2] = a[2] - b[2] - b[1];
    } else {
        c[0] = a[0] + b[0];
        for (std::size_t s = 1; s + 2 <= j; ++s) {
            c[s] = a[s] + b[s] - b[s - 1];
        }
        c[j - 1] = a[j - 1] + b[j - 1] + b[j] - b[j - 2];
        c[j] = a[j] - b[j] - b[j - 1];
    }
    return L2Weights{j, std::move(c)};
}

/// Samples u(t_0), ..., u(t_m) on a uniform grid with step tau.
struct TimeSeries {
    std::vector<double> values;
    double tau;

    TimeSeries(std::vector<double> v, double step) : values(std::move(v)), tau(step) {
        if (values.size() < 2) {
            throw std::invalid_argument("TimeSeries needs at least two samples");
        }
        if (!(tau > 0.0)) {
            throw std::invalid_argument("TimeSeries step must be positive");
        }
    }

    template <class F>
    static TimeSeries sample(F&& u, double tau, std::size_t steps) {
        std::vector<double> v(steps + 1);
        for (std::size_t s = 0; s <= steps; ++s) {
            v[s] = u(static_cast<double>(s) * tau);
        }
        return TimeSeries(std::move(v), tau);
    }
};

/// sum_{s=0}^{j} w[j-s] (u_{s+1} - u_s); the weighted-history sum shared
/// by the L1, L2 and bar-weight operators.
inline double weighted_differences(std::span<const double> weights, std::span<const double> u) {
    const std::size_t j = weights.size() - 1;
    double acc = 0.0;
    for (std::size_t s = 0; s <= j; ++s) {
        acc += weights[j - s] * (u[s + 1] - u[s]);
    }
    return acc;
}

/// L2 approximation of the Caputo derivative at t_{j+1}.
inline double l2_caputo(const TimeSeries& u, std::size_t j, const AlphaParam& alpha) {
    if (j == 0) {
        throw std::invalid_argument("l2_caputo: level j must be >= 1");
    }
    if (u.values.size() < j + 2) {
        throw std::invalid_argument("l2_caputo: series too short for level " + std::to_string(j));
    }
    const L2Weights w = c_weights(j, alpha);
    return alpha.scale(u.tau) * weighted_differences(w.c, u.values);
}

/// Samples on a (possibly) nonuniform grid t_0 < t_1 < ... < t_{j+1}.
struct NonuniformSeries {
    std::vector<double> times;
    std::vector<double> values;
};

/// L1 approximation of the Caputo derivative at the last time point, with
/// the kernel integrated exactly over each subinterval.
inline double l1_caputo(const NonuniformSeries& u, const AlphaParam& alpha) {
    if (u.times.size() != u.values.size() || u.times.size() < 2) {
        throw std::invalid_argument("l1_caputo: need matching times/values with at least two points");
    }
    for (std::size_t s = 0; s + 1 < u.times.size(); ++s) {
        if (!(u.times[s + 1] > u.times[s])) {
            throw std::invalid_argument("l1_caputo: time points must be strictly increasing");
        }
    }
    const double p = 1.0 - alpha.value();
    const double t_end = u.times.back();
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < u.times.size(); ++s) {
        const double dt = u.times[s + 1] - u.times[s];
        const double kernel =
            (std::pow(t_end - u.times[s], p) - std::pow(t_end - u.times[s + 1], p)) / p;
        acc += (u.values[s + 1] - u.values[s]) / dt * kernel;
    }
    return acc / alpha.gamma_1ma();
}

/// Caputo derivative of t^mu: Gamma(mu+1)/Gamma(mu+1-alpha) t^{mu-alpha}.
inline double exact_caputo_power(double mu, const AlphaParam& alpha, double t) {
    if (!(mu > 0.0)) {
        throw std::invalid_argument("exact_caputo_power: exponent must be positive");
    }
    if (t <= 0.0) {
        return 0.0;
    }
    return gamma_fn(mu + 1.0) / gamma_fn(mu + 1.0 - alpha.value()) *
           std::pow(t, mu - alpha.value());
}

/// E_j(c0, c1) evaluated at v_j = v_cur, v_{j-1} = v_prev.
/// Requires c0 >= max(c1, -3 c1).
inline double energy_E(double v_cur, double v_prev, double c0, double c1) {
    if (c0 < c1 || c0 < -3.0 * c1) {
        throw std::invalid_argument("energy_E: requires c0 >= max(c1, -3 c1)");
    }
    const double r1 = std::sqrt((c0 - c1) / 2.0);
    const double r2 = std::sqrt((c0 + 3.0 * c1) / 2.0);
    const double mix = 0.5 * r1 + 0.5 * r2;
    const double tail = r1 * v_cur - mix * v_prev;
    return mix * mix * v_cur * v_cur + tail * tail;
}

/// Modified weights with the first two entries replaced by c_2.
inline std::vector<double> bar_weights(std::size_t j, const AlphaParam& alpha) {
    if (j < 2) {
        throw std::invalid_argument("bar_weights: level j must be >= 2");
    }
    std::vector<double> bar = c_weights(j, alpha).c;
    bar[0] = bar[2];
    bar[1] = bar[2];
    return bar;
}

/// Bar-weight operator applied to samples u_0..u_{j+1} with step tau.
inline double bar_caputo(std::span<const double> u, double tau, std::size_t j,
                         const AlphaParam& alpha) {
    if (u.size() < j + 2) {
        throw std::invalid_argument("bar_caputo: series too short");
    }
    const std::vector<double> bar = bar_weights(j, alpha);
    return alpha.scale(tau) * weighted_differences(bar, u);
}

}  // namespace l2frac
