#pragma once

namespace ramsey {

/// Instantaneous utility of one household. Both supported families satisfy the Inada
/// conditions and have a closed-form inverse marginal utility:
///   logarithmic   u(c) = log c,                 u'(c) = 1/c
///   isoelastic    u(c) = c^(1-s) / (1-s),        u'(c) = c^(-s),   s > 0, s != 1
class Utility {
public:
    enum class Kind { Logarithmic, Isoelastic };

    static Utility logarithmic() { return Utility(Kind::Logarithmic, 1.0); }
    static Utility isoelastic(double sigma);

    Kind kind() const noexcept { return kind_; }
    double sigma() const noexcept { return sigma_; }

    double value(double c) const;
    double marginal(double c) const;
    double curvature(double c) const;  // u''(c)

    /// Returns c with u'(c) = x. Throws DomainError for x <= 0.
    double inverse_marginal(double x) const;

    friend bool operator==(const Utility&, const Utility&) = default;

private:
    Utility(Kind kind, double sigma) : kind_(kind), sigma_(sigma) {}

    Kind kind_;
    double sigma_;
};

}  // namespace ramsey
