#ifndef MVOPTBL_MAT_HPP
#define MVOPTBL_MAT_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvoptbl {

/// Dense real matrix, row-major storage.
class Mat {
public:
    Mat() = default;

    Mat(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("Mat: dimensions must be positive");
    }

    Mat(int rows, int cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (rows < 1 || cols < 1)
            throw std::invalid_argument("Mat: dimensions must be positive");
        if (data_.size() != static_cast<std::size_t>(rows) * cols)
            throw std::invalid_argument("Mat: entry count does not match dimensions");
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Mat diag(const std::vector<double>& d) {
        Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (int i = 0; i < m.rows(); ++i) m(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    Mat& operator+=(const Mat& o) {
        check_same_shape(o, "+");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        check_same_shape(o, "-");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Mat& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(Mat a, double s) { return a *= s; }
    friend Mat operator*(double s, Mat a) { return a *= s; }
    friend Mat operator-(Mat a) { return a *= -1.0; }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("Mat: product dimension mismatch " + a.shape_str() + " * " + b.shape_str());
        Mat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    /// Adjoint; all data is real, so this is the transpose.
    Mat transpose() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double norm_inf_entry() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double norm_fro() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    bool is_symmetric(double abs_tol) const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j)
                if (std::abs((*this)(i, j) - (*this)(j, i)) > abs_tol) return false;
        return true;
    }

    bool is_antisymmetric(double abs_tol) const {
        if (rows_ != cols_) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = i; j < cols_; ++j)
                if (std::abs((*this)(i, j) + (*this)(j, i)) > abs_tol) return false;
        return true;
    }

private:
    void check_same_shape(const Mat& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string("Mat: dimension mismatch in ") + op);
    }
    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues ascending; columns of `vectors` are the eigenvectors.
struct SymEig {
    std::vector<double> values;
    Mat vectors;
};

inline SymEig sym_eig(const Mat& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("sym_eig: matrix must be square");
    const int n = a.rows();
    Mat s = a;
    Mat v = Mat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
        if (off < 1e-300) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (std::abs(apq) <= 1e-30 * (std::abs(s(p, p)) + std::abs(s(q, q)))) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (int k = 0; k < n; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
    }
    // sort ascending
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (s(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(j)]) <
                s(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]))
                std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    SymEig out;
    out.values.resize(static_cast<std::size_t>(n));
    out.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        out.values[static_cast<std::size_t>(j)] = s(src, src);
        for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, src);
    }
    return out;
}

inline double smallest_eigenvalue(const Mat& a) {
    return sym_eig(a).values.front();
}

/// Thin SVD by one-sided Jacobi orthogonalization of the columns of A.
struct Svd {
    Mat u;                        // m x k, columns of zero singular value are zero
    std::vector<double> sigma;    // descending
    Mat v;                        // k x k orthogonal
};

inline Svd svd_jacobi(const Mat& a) {
    const int m = a.rows(), k = a.cols();
    Mat u = a;
    Mat v = Mat::identity(k);
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < k; ++p)
            for (int q = p + 1; q < k; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < m; ++i) {
                    app += u(i, p) * u(i, p);
                    aqq += u(i, q) * u(i, q);
                    apq += u(i, p) * u(i, q);
                }
                if (std::abs(apq) <= 1e-30 * std::sqrt(app * aqq) || apq == 0.0) continue;
                rotated = true;
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int i = 0; i < m; ++i) {
                    const double uip = u(i, p), uiq = u(i, q);
                    u(i, p) = c * uip - sn * uiq;
                    u(i, q) = sn * uip + c * uiq;
                }
                for (int i = 0; i < k; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - sn * viq;
                    v(i, q) = sn * vip + c * viq;
                }
            }
        if (!rotated) break;
    }
    std::vector<double> sigma(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += u(i, j) * u(i, j);
        sigma[static_cast<std::size_t>(j)] = std::sqrt(s);
    }
    // sort descending, normalize U columns
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (sigma[static_cast<std::size_t>(j)] > sigma[static_cast<std::size_t>(i)]) {
                std::swap(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]);
                for (int r = 0; r < m; ++r) std::swap(u(r, i), u(r, j));
                for (int r = 0; r < k; ++r) std::swap(v(r, i), v(r, j));
            }
    for (int j = 0; j < k; ++j) {
        const double s = sigma[static_cast<std::size_t>(j)];
        if (s > 0.0)
            for (int i = 0; i < m; ++i) u(i, j) /= s;
        else
            for (int i = 0; i < m; ++i) u(i, j) = 0.0;
    }
    return Svd{std::move(u), std::move(sigma), std::move(v)};
}

/// Minimum-norm least-squares solution of A x = b with rank analysis.
struct LsqResult {
    std::vector<double> solution;           // length k
    std::vector<std::vector<double>> nullspace;  // each length k, orthonormal
    double residual_norm = 0.0;             // ||A x - b||_2
    int rank = 0;
};

inline LsqResult solve_least_squares(const Mat& a, const std::vector<double>& b,
                                     double rel_tol = 1e-8) {
    const int m = a.rows(), k = a.cols();
    if (b.size() != static_cast<std::size_t>(m))
        throw std::invalid_argument("solve_least_squares: rhs length mismatch");
    const Svd svd = svd_jacobi(a);
    const double smax = svd.sigma.empty() ? 0.0 : svd.sigma.front();
    const double thresh = rel_tol * smax;

    LsqResult out;
    out.solution.assign(static_cast<std::size_t>(k), 0.0);
    for (int j = 0; j < k; ++j) {
        const double s = svd.sigma[static_cast<std::size_t>(j)];
        if (s > thresh && s > 0.0) {
            ++out.rank;
            double ub = 0.0;
            for (int i = 0; i < m; ++i) ub += svd.u(i, j) * b[static_cast<std::size_t>(i)];
            const double coef = ub / s;
            for (int i = 0; i < k; ++i) out.solution[static_cast<std::size_t>(i)] += coef * svd.v(i, j);
        } else {
            std::vector<double> nv(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) nv[static_cast<std::size_t>(i)] = svd.v(i, j);
            out.nullspace.push_back(std::move(nv));
        }
    }
    double rss = 0.0;
    for (int i = 0; i < m; ++i) {
        double axi = 0.0;
        for (int j = 0; j < k; ++j) axi += a(i, j) * out.solution[static_cast<std::size_t>(j)];
        const double r = axi - b[static_cast<std::size_t>(i)];
        rss += r * r;
    }
    out.residual_norm = std::sqrt(rss);
    return out;
}

}  // namespace mvoptbl

#endif
