#pragma once

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "l2frac/kernel.hpp"

namespace l2frac {

/// Caputo derivative of u at time t by Gauss-Kronrod quadrature of
/// int_0^t u'(t - r) r^{-alpha} dr, given du = u'.
///
/// The lag r is cut into pieces [t 2^{-k-1}, t 2^{-k}], each no longer than
/// its distance to the singular endpoint r = 0, and a 61-point Kronrod rule
/// is applied on each. The last piece [0, delta], delta = t 2^{-kLevels}, is
/// integrated analytically with u' frozen at t; its error is O(delta^{2-alpha}).
/// Working in r keeps the kernel free of the cancellation in t - s.
template <class Derivative>
double caputo_reference(Derivative&& du, double t, const AlphaParam& alpha) {
    if (t < 0.0) {
        throw std::invalid_argument("caputo_reference: t must be nonnegative");
    }
    if (t == 0.0) {
        return 0.0;
    }
    constexpr int kLevels = 48;
    const double a = alpha.value();
    auto integrand = [&](double r) { return du(t - r) * std::pow(r, -a); };

    using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
    double acc = 0.0;
    double width = t;
    for (int k = 0; k < kLevels; ++k) {
        acc += Rule::integrate(integrand, 0.5 * width, width, 0);
        width *= 0.5;
    }
    acc += du(t) * std::pow(width, 1.0 - a) / (1.0 - a);
    return acc / alpha.gamma_1ma();
}

}  // namespace l2frac
