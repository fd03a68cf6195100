#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace corrucas {

/// Dense univariate polynomial with real coefficients, lowest power first.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);
    Polynomial(std::initializer_list<double> coefficients);

    static Polynomial constant(double c) { return Polynomial{c}; }

    /// Highest power with a stored coefficient; 0 for the zero polynomial.
    int degree() const noexcept;
    std::span<const double> coefficients() const noexcept { return coeffs_; }
    double coefficient(int power) const noexcept;

    double operator()(double x) const noexcept;

    Polynomial derivative() const;
    /// Antiderivative vanishing at 0.
    Polynomial antiderivative() const;
    /// Definite integral over [lo, hi].
    double integrate(double lo, double hi) const;
    /// q(x) = p(x + shift).
    Polynomial shifted(double shift) const;
    Polynomial pow(int n) const;

    Polynomial& operator+=(const Polynomial& rhs);
    Polynomial& operator-=(const Polynomial& rhs);
    Polynomial& operator*=(double s);

    friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
    friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
    friend Polynomial operator*(Polynomial lhs, double s) { return lhs *= s; }
    friend Polynomial operator*(double s, Polynomial rhs) { return rhs *= s; }
    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);

private:
    std::vector<double> coeffs_;
};

} // namespace corrucas
