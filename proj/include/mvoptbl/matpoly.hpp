#ifndef MVOPTBL_MATPOLY_HPP
#define MVOPTBL_MATPOLY_HPP

#include <limits>
#include <stdexcept>
#include <vector>

#include "mvoptbl/mat.hpp"

namespace mvoptbl {

/// Degree marker for the zero polynomial; never used in arithmetic.
inline constexpr int kDegreeZeroPoly = std::numeric_limits<int>::min();

/// Matrix polynomial in one real variable. coeff(p) multiplies x^p.
/// Trailing zero coefficients are trimmed so degree is canonical.
class MatPoly {
public:
    MatPoly() = default;

    explicit MatPoly(int size) : size_(size) {
        if (size < 1) throw std::invalid_argument("MatPoly: size must be positive");
    }

    MatPoly(int size, std::vector<Mat> coeffs) : size_(size), coeffs_(std::move(coeffs)) {
        for (const Mat& c : coeffs_)
            if (c.rows() != size || c.cols() != size)
                throw std::invalid_argument("MatPoly: coefficient size mismatch");
        trim();
    }

    static MatPoly constant(Mat c) {
        MatPoly p(c.rows());
        p.coeffs_.push_back(std::move(c));
        p.trim();
        return p;
    }

    static MatPoly identity(int size) { return constant(Mat::identity(size)); }

    /// x^k * C
    static MatPoly monomial(int k, Mat c) {
        MatPoly p(c.rows());
        p.coeffs_.assign(static_cast<std::size_t>(k), Mat(c.rows(), c.cols()));
        p.coeffs_.push_back(std::move(c));
        p.trim();
        return p;
    }

    int size() const { return size_; }
    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return coeffs_.empty() ? kDegreeZeroPoly : static_cast<int>(coeffs_.size()) - 1; }

    /// Coefficient of x^p (zero matrix beyond the stored degree).
    Mat coeff(int p) const {
        if (p < 0 || p >= static_cast<int>(coeffs_.size())) return Mat(size_, size_);
        return coeffs_[static_cast<std::size_t>(p)];
    }

    Mat eval(double x) const {
        Mat r(size_, size_);
        for (int p = static_cast<int>(coeffs_.size()) - 1; p >= 0; --p) {
            r *= x;
            r += coeffs_[static_cast<std::size_t>(p)];
        }
        return r;
    }

    MatPoly& operator+=(const MatPoly& o) {
        check_size(o);
        if (o.coeffs_.size() > coeffs_.size())
            coeffs_.resize(o.coeffs_.size(), Mat(size_, size_));
        for (std::size_t p = 0; p < o.coeffs_.size(); ++p) coeffs_[p] += o.coeffs_[p];
        trim();
        return *this;
    }
    MatPoly& operator-=(const MatPoly& o) { return *this += (o * -1.0); }
    MatPoly& operator*=(double s) {
        for (Mat& c : coeffs_) c *= s;
        trim();
        return *this;
    }

    friend MatPoly operator+(MatPoly a, const MatPoly& b) { return a += b; }
    friend MatPoly operator-(MatPoly a, const MatPoly& b) { return a -= b; }
    friend MatPoly operator*(MatPoly a, double s) { return a *= s; }
    friend MatPoly operator*(double s, MatPoly a) { return a *= s; }

    friend MatPoly operator*(const MatPoly& a, const MatPoly& b) {
        a.check_size(b);
        MatPoly c(a.size_);
        if (a.is_zero() || b.is_zero()) return c;
        c.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, Mat(a.size_, a.size_));
        for (std::size_t p = 0; p < a.coeffs_.size(); ++p)
            for (std::size_t q = 0; q < b.coeffs_.size(); ++q)
                c.coeffs_[p + q] += a.coeffs_[p] * b.coeffs_[q];
        c.trim();
        return c;
    }

    /// Right-multiply every coefficient by a constant matrix.
    MatPoly times_mat(const Mat& m) const {
        MatPoly r(size_);
        for (const Mat& c : coeffs_) r.coeffs_.push_back(c * m);
        r.trim();
        return r;
    }

    MatPoly mat_times(const Mat& m) const {
        MatPoly r(size_);
        for (const Mat& c : coeffs_) r.coeffs_.push_back(m * c);
        r.trim();
        return r;
    }

    /// Multiply by x^k.
    MatPoly times_xk(int k) const {
        if (is_zero()) return *this;
        MatPoly r(size_);
        r.coeffs_.assign(static_cast<std::size_t>(k), Mat(size_, size_));
        r.coeffs_.insert(r.coeffs_.end(), coeffs_.begin(), coeffs_.end());
        return r;
    }

    /// Coefficient-wise transpose (the adjoint; data is real).
    MatPoly adjoint() const {
        MatPoly r(size_);
        for (const Mat& c : coeffs_) r.coeffs_.push_back(c.transpose());
        r.trim();
        return r;
    }

    MatPoly derivative() const {
        MatPoly r(size_);
        for (std::size_t p = 1; p < coeffs_.size(); ++p)
            r.coeffs_.push_back(coeffs_[p] * static_cast<double>(p));
        r.trim();
        return r;
    }

    /// r with r(x) = p(x+h), by binomial re-expansion.
    MatPoly shift_arg(double h) const {
        if (is_zero() || h == 0.0) return *this;
        const int d = degree();
        MatPoly r(size_);
        r.coeffs_.assign(coeffs_.size(), Mat(size_, size_));
        for (int p = 0; p <= d; ++p) {
            // coeff_p (x+h)^p = sum_q coeff_p * C(p,q) h^(p-q) x^q
            double binom = 1.0;  // C(p,0)
            double hpow = 1.0;
            std::vector<double> pw(static_cast<std::size_t>(p) + 1);
            for (int i = 0; i <= p; ++i) {
                pw[static_cast<std::size_t>(i)] = hpow;
                hpow *= h;
            }
            for (int q = 0; q <= p; ++q) {
                if (q > 0) binom = binom * static_cast<double>(p - q + 1) / static_cast<double>(q);
                r.coeffs_[static_cast<std::size_t>(q)] +=
                    coeffs_[static_cast<std::size_t>(p)] * (binom * pw[static_cast<std::size_t>(p - q)]);
            }
        }
        r.trim();
        return r;
    }

    /// Maximum absolute entry over all coefficients; 0 for the zero polynomial.
    double max_coeff_norm() const {
        double m = 0.0;
        for (const Mat& c : coeffs_) m = std::max(m, c.norm_inf_entry());
        return m;
    }

private:
    void check_size(const MatPoly& o) const {
        if (size_ != o.size_) throw std::invalid_argument("MatPoly: size mismatch");
    }
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().norm_inf_entry() == 0.0) coeffs_.pop_back();
    }

    int size_ = 0;
    std::vector<Mat> coeffs_;
};

}  // namespace mvoptbl

#endif
