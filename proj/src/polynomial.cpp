#include "corrucas/polynomial.hpp"

#include <algorithm>
#include <utility>

#include "corrucas/errors.hpp"

namespace corrucas {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {}

Polynomial::Polynomial(std::initializer_list<double> coefficients) : coeffs_(coefficients) {}

int Polynomial::degree() const noexcept {
    return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1;
}

double Polynomial::coefficient(int power) const noexcept {
    if (power < 0 || static_cast<std::size_t>(power) >= coeffs_.size()) return 0.0;
    return coeffs_[static_cast<std::size_t>(power)];
}

double Polynomial::operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{0.0};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
    std::vector<double> a(coeffs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
    return Polynomial(std::move(a));
}

double Polynomial::integrate(double lo, double hi) const {
    const Polynomial a = antiderivative();
    return a(hi) - a(lo);
}

Polynomial Polynomial::shifted(double shift) const {
    // Horner in polynomial arithmetic: p(x + s) = (...(c_n (x+s) + c_{n-1})(x+s) ...)
    const Polynomial lin{shift, 1.0};
    Polynomial acc{0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * lin;
        acc += Polynomial{*it};
    }
    return acc;
}

Polynomial Polynomial::pow(int n) const {
    if (n < 0) throw InvalidArgument("Polynomial::pow: negative exponent");
    Polynomial result{1.0};
    for (int i = 0; i < n; ++i) result = result * *this;
    return result;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
    if (lhs.coeffs_.empty() || rhs.coeffs_.empty()) return Polynomial{0.0};
    std::vector<double> out(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
    return Polynomial(std::move(out));
}

} // namespace corrucas
