#include "ramsey/utility.hpp"

#include <cmath>
#include <string>

#include "ramsey/error.hpp"

namespace ramsey {

Utility Utility::isoelastic(double sigma) {
    if (!(sigma > 0.0) || sigma == 1.0 || !std::isfinite(sigma)) {
        throw DomainError("isoelastic utility needs sigma > 0 and sigma != 1, got " +
                          std::to_string(sigma));
    }
    return Utility(Kind::Isoelastic, sigma);
}

double Utility::value(double c) const {
    if (!(c > 0.0)) throw DomainError("utility evaluated at nonpositive consumption");
    if (kind_ == Kind::Logarithmic) return std::log(c);
    return std::pow(c, 1.0 - sigma_) / (1.0 - sigma_);
}

double Utility::marginal(double c) const {
    if (!(c > 0.0)) throw DomainError("marginal utility evaluated at nonpositive consumption");
    if (kind_ == Kind::Logarithmic) return 1.0 / c;
    return std::pow(c, -sigma_);
}

double Utility::curvature(double c) const {
    if (!(c > 0.0)) throw DomainError("utility curvature evaluated at nonpositive consumption");
    if (kind_ == Kind::Logarithmic) return -1.0 / (c * c);
    return -sigma_ * std::pow(c, -sigma_ - 1.0);
}

double Utility::inverse_marginal(double x) const {
    if (!(x > 0.0)) throw DomainError("inverse marginal utility needs a positive argument");
    if (kind_ == Kind::Logarithmic) return 1.0 / x;
    return std::pow(x, -1.0 / sigma_);
}

}  // namespace ramsey
