#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>

namespace ltc {

inline constexpr int kMaxDim = 3;

/// Small dense vector for state/frequency points, dimension 1..3.
struct Vec {
    std::array<double, kMaxDim> a{};
    int dim = 1;

    Vec() = default;
    explicit Vec(double x) : a{x, 0.0, 0.0}, dim(1) {}
    Vec(double x, double y) : a{x, y, 0.0}, dim(2) {}
    Vec(double x, double y, double z) : a{x, y, z}, dim(3) {}

    static Vec zero(int d) {
        Vec v;
        v.dim = d;
        return v;
    }

    double& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return a[static_cast<std::size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < dim; ++i) a[i] += o.a[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < dim; ++i) a[i] -= o.a[i];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int i = 0; i < dim; ++i) a[i] *= s;
        return *this;
    }

    friend Vec operator+(Vec l, const Vec& r) { return l += r; }
    friend Vec operator-(Vec l, const Vec& r) { return l -= r; }
    friend Vec operator*(double s, Vec v) { return v *= s; }
    friend Vec operator*(Vec v, double s) { return v *= s; }

    friend bool operator==(const Vec& l, const Vec& r) {
        if (l.dim != r.dim) return false;
        for (int i = 0; i < l.dim; ++i)
            if (l.a[i] != r.a[i]) return false;
        return true;
    }

    double norm2() const {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += a[i] * a[i];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }
};

inline double dot(const Vec& l, const Vec& r) {
    double s = 0.0;
    for (int i = 0; i < l.dim; ++i) s += l.a[i] * r.a[i];
    return s;
}

/// Symmetric d x d matrix, d = 1..3 (diffusion coefficients).
struct Mat {
    std::array<std::array<double, kMaxDim>, kMaxDim> m{};
    int dim = 1;

    static Mat identity(int d) {
        Mat c;
        c.dim = d;
        for (int i = 0; i < d; ++i) c.m[i][i] = 1.0;
        return c;
    }
    static Mat scalar(int d, double s) {
        Mat c;
        c.dim = d;
        for (int i = 0; i < d; ++i) c.m[i][i] = s;
        return c;
    }

    double operator()(int i, int j) const { return m[i][j]; }
    double& operator()(int i, int j) { return m[i][j]; }

    Vec apply(const Vec& v) const {
        Vec r = Vec::zero(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) r[i] += m[i][j] * v[j];
        return r;
    }

    double quad(const Vec& u) const { return dot(u, apply(u)); }
};

/// Lower Cholesky factor; returns false when the matrix is not PSD
/// (within a small pivot tolerance).
bool cholesky(const Mat& c, Mat& lower);

}  // namespace ltc
