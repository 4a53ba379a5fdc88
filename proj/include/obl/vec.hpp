#ifndef OBL_VEC_HPP
#define OBL_VEC_HPP

#include <cmath>
#include <stdexcept>

namespace obl {

// Small dense vector in dimension 1 or 2. The dimension is a runtime value
// because problem dimension comes from the experiment config.
struct Vec {
    double x = 0.0;
    double y = 0.0;
    int n = 1;

    static Vec d1(double x) { return Vec{x, 0.0, 1}; }
    static Vec d2(double x, double y) { return Vec{x, y, 2}; }
    static Vec zero(int n) { return Vec{0.0, 0.0, n}; }

    double norm() const { return std::sqrt(x * x + y * y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec operator+(const Vec& a, const Vec& b) { return Vec{a.x + b.x, a.y + b.y, a.n}; }
inline Vec operator-(const Vec& a, const Vec& b) { return Vec{a.x - b.x, a.y - b.y, a.n}; }
inline Vec operator*(double s, const Vec& a) { return Vec{s * a.x, s * a.y, a.n}; }
inline double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y; }

// Symmetric matrix in dimension 1 or 2.
struct SymMat {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
    int n = 1;

    static SymMat zero(int n) { return SymMat{0.0, 0.0, 0.0, n}; }
    static SymMat identity(int n) { return SymMat{1.0, 0.0, n == 2 ? 1.0 : 0.0, n}; }

    // a*I + b*(v (x) v)
    static SymMat iso_plus_outer(int n, double a, double b, const Vec& v) {
        SymMat m = identity(n);
        m.xx = a + b * v.x * v.x;
        m.xy = b * v.x * v.y;
        m.yy = (n == 2) ? a + b * v.y * v.y : 0.0;
        return m;
    }

    double min_eig() const {
        if (n == 1) return xx;
        double tr = xx + yy;
        double disc = std::sqrt((xx - yy) * (xx - yy) + 4.0 * xy * xy);
        return 0.5 * (tr - disc);
    }
    double max_eig() const {
        if (n == 1) return xx;
        double tr = xx + yy;
        double disc = std::sqrt((xx - yy) * (xx - yy) + 4.0 * xy * xy);
        return 0.5 * (tr + disc);
    }
    double opnorm() const { return std::max(std::abs(min_eig()), std::abs(max_eig())); }
    double quad(const Vec& e) const {
        return xx * e.x * e.x + 2.0 * xy * e.x * e.y + yy * e.y * e.y;
    }
    double max_asym() const { return 0.0; }  // stored symmetric by construction
};

inline SymMat operator+(const SymMat& a, const SymMat& b) {
    return SymMat{a.xx + b.xx, a.xy + b.xy, a.yy + b.yy, a.n};
}
inline SymMat operator*(double s, const SymMat& a) {
    return SymMat{s * a.xx, s * a.xy, s * a.yy, a.n};
}

}  // namespace obl

#endif
