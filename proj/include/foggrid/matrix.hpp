#pragma once

#include <cassert>
#include <initializer_list>
#include <string>
#include <vector>

namespace foggrid::nn {

/// Dense row-major matrix of doubles. The only tensor type in the project;
/// vectors are represented as 1xN or Nx1 matrices.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
        assert(rows >= 0 && cols >= 0);
    }

    static Matrix zeros(int rows, int cols) { return Matrix(rows, cols, 0.0); }
    static Matrix identity(int n);
    static Matrix from(std::initializer_list<std::initializer_list<double>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long size() const { return static_cast<long>(data_.size()); }
    bool empty() const { return data_.empty(); }

    double& operator()(int r, int c) {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return data_[static_cast<size_t>(r) * cols_ + c];
    }
    double operator()(int r, int c) const {
        assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
        return data_[static_cast<size_t>(r) * cols_ + c];
    }

    double* row(int r) { return data_.data() + static_cast<size_t>(r) * cols_; }
    const double* row(int r) const { return data_.data() + static_cast<size_t>(r) * cols_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
    std::string shape_str() const;

    /// True when every entry is finite (no NaN/Inf).
    bool all_finite() const;

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// Basic kernels. Shape mismatches throw ShapeError naming both shapes.
Matrix matmul(const Matrix& a, const Matrix& b);     // a[m x k] * b[k x n]
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a[m x k] * b[n x k]^T
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // a[k x m]^T * b[k x n]
Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix col_sums(const Matrix& a);                    // 1 x cols
double sum(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace foggrid::nn
