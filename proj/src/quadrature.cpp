#include "corrucas/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include "corrucas/errors.hpp"

namespace corrucas {

GaussLegendre::GaussLegendre(int order) {
    if (order < 1 || order > 200) throw InvalidArgument("GaussLegendre: order must lie in [1, 200]");
    // legendre_p_zeros returns the non-negative zeros, ascending.
    const auto zeros = boost::math::legendre_p_zeros<double>(order);
    for (double z : zeros) {
        const double dp = boost::math::legendre_p_prime<double>(order, z);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        if (z == 0.0) {
            nodes_.push_back(0.0);
            weights_.push_back(w);
        } else {
            nodes_.push_back(-z);
            weights_.push_back(w);
            nodes_.push_back(z);
            weights_.push_back(w);
        }
    }
}

} // namespace corrucas
