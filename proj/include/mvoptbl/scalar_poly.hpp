#ifndef MVOPTBL_SCALAR_POLY_HPP
#define MVOPTBL_SCALAR_POLY_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mvoptbl {

/// Scalar polynomial as a coefficient vector, coeff[p] multiplying x^p.
class ScalarPoly {
public:
    ScalarPoly() = default;
    ScalarPoly(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static ScalarPoly constant(double c) { return ScalarPoly({c}); }

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    double coeff(int p) const {
        if (p < 0 || p >= static_cast<int>(coeffs_.size())) return 0.0;
        return coeffs_[static_cast<std::size_t>(p)];
    }

    double eval(double x) const {
        double r = 0.0;
        for (int p = static_cast<int>(coeffs_.size()) - 1; p >= 0; --p)
            r = r * x + coeffs_[static_cast<std::size_t>(p)];
        return r;
    }

    ScalarPoly& operator+=(const ScalarPoly& o) {
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
        for (std::size_t p = 0; p < o.coeffs_.size(); ++p) coeffs_[p] += o.coeffs_[p];
        trim();
        return *this;
    }
    ScalarPoly& operator*=(double s) {
        for (double& c : coeffs_) c *= s;
        trim();
        return *this;
    }
    friend ScalarPoly operator+(ScalarPoly a, const ScalarPoly& b) { return a += b; }
    friend ScalarPoly operator*(ScalarPoly a, double s) { return a *= s; }
    friend ScalarPoly operator*(double s, ScalarPoly a) { return a *= s; }

    friend ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b) {
        if (a.is_zero() || b.is_zero()) return ScalarPoly();
        std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
        for (std::size_t p = 0; p < a.coeffs_.size(); ++p)
            for (std::size_t q = 0; q < b.coeffs_.size(); ++q)
                c[p + q] += a.coeffs_[p] * b.coeffs_[q];
        return ScalarPoly(std::move(c));
    }

    /// Multiply by x.
    ScalarPoly times_x() const {
        if (is_zero()) return *this;
        std::vector<double> c(coeffs_.size() + 1, 0.0);
        for (std::size_t p = 0; p < coeffs_.size(); ++p) c[p + 1] = coeffs_[p];
        return ScalarPoly(std::move(c));
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
    }
    std::vector<double> coeffs_;
};

inline double pochhammer(double a, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= a + i;
    return r;
}

/// Physicists' Hermite H_n: H_0 = 1, H_1 = 2x, H_{n+1} = 2x H_n - 2n H_{n-1}.
inline ScalarPoly hermite(int n) {
    if (n < 0) throw std::invalid_argument("hermite: n must be nonnegative");
    ScalarPoly pm1 = ScalarPoly::constant(1.0);
    if (n == 0) return pm1;
    ScalarPoly p({0.0, 2.0});
    for (int k = 1; k < n; ++k) {
        ScalarPoly next = p.times_x() * 2.0 + pm1 * (-2.0 * k);
        pm1 = std::move(p);
        p = std::move(next);
    }
    return p;
}

/// Standard Laguerre L_n^{(a)}: leading coefficient (-1)^n / n!.
inline ScalarPoly laguerre(int n, double a) {
    if (n < 0) throw std::invalid_argument("laguerre: n must be nonnegative");
    ScalarPoly pm1 = ScalarPoly::constant(1.0);
    if (n == 0) return pm1;
    ScalarPoly p({1.0 + a, -1.0});
    for (int k = 1; k < n; ++k) {
        // (k+1) L_{k+1} = (2k+1+a-x) L_k - (k+a) L_{k-1}
        ScalarPoly next = (p * (2.0 * k + 1.0 + a) + p.times_x() * -1.0 + pm1 * (-(k + a))) *
                          (1.0 / (k + 1.0));
        pm1 = std::move(p);
        p = std::move(next);
    }
    return p;
}

/// Standard Gegenbauer C_n^{(nu)}: C_0 = 1, C_1 = 2 nu x.
inline ScalarPoly gegenbauer(int n, double nu) {
    if (n < 0) throw std::invalid_argument("gegenbauer: n must be nonnegative");
    ScalarPoly pm1 = ScalarPoly::constant(1.0);
    if (n == 0) return pm1;
    ScalarPoly p({0.0, 2.0 * nu});
    for (int k = 1; k < n; ++k) {
        // (k+1) C_{k+1} = 2(k+nu) x C_k - (k+2nu-1) C_{k-1}
        ScalarPoly next = (p.times_x() * (2.0 * (k + nu)) + pm1 * (-(k + 2.0 * nu - 1.0))) *
                          (1.0 / (k + 1.0));
        pm1 = std::move(p);
        p = std::move(next);
    }
    return p;
}

/// Charlier c_n^{(a)} in the 2F0(-n,-x;;-1/a) normalization:
/// c_n^{(a)}(x) = sum_k (-n)_k / k! * (-1/a)^k * (-x)_k,  with (-x)_k expanded in x.
inline ScalarPoly charlier(int n, double a) {
    if (n < 0) throw std::invalid_argument("charlier: n must be nonnegative");
    if (a <= 0.0) throw std::invalid_argument("charlier: a must be positive");
    ScalarPoly result = ScalarPoly::constant(1.0);
    ScalarPoly falling = ScalarPoly::constant(1.0);  // (-x)_k as a polynomial in x
    for (int k = 1; k <= n; ++k) {
        // (-x)_k = (-x)_{k-1} * (-x + k - 1)
        falling = falling * ScalarPoly({static_cast<double>(k - 1), -1.0});
        const double factor = pochhammer(-n, k) / std::tgamma(k + 1.0) * std::pow(-1.0 / a, k);
        result += falling * factor;
    }
    return result;
}

}  // namespace mvoptbl

#endif
