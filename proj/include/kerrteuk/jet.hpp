// Truncated bivariate Taylor arithmetic in (u,v), complex coefficients.
// Used to differentiate analytic geometry exactly: Christoffel symbols,
// connection contractions, and pointwise extraction of composed mode
// operators, all without finite-difference noise.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace ktk {

using cplx = std::complex<double>;

template <int D>
class Jet2 {
public:
    static_assert(D >= 1);
    static constexpr int kSize = (D + 1) * (D + 2) / 2;

    // coefficient of u^i v^j, i+j <= D
    static constexpr int idx(int i, int j) {
        int t = i + j;
        return t * (t + 1) / 2 + j;
    }

    Jet2() { c.fill(cplx(0.0)); }
    Jet2(cplx v) {  // NOLINT: implicit scalar lift is intended
        c.fill(cplx(0.0));
        c[0] = v;
    }
    Jet2(double v) : Jet2(cplx(v)) {}
    Jet2& operator=(cplx v) {
        c.fill(cplx(0.0));
        c[0] = v;
        return *this;
    }
    static Jet2 var_u(cplx v) {
        Jet2 j(v);
        j.c[idx(1, 0)] = 1.0;
        return j;
    }
    static Jet2 var_v(cplx v) {
        Jet2 j(v);
        j.c[idx(0, 1)] = 1.0;
        return j;
    }

    cplx val() const { return c[0]; }
    cplx coeff(int i, int j) const { return c[idx(i, j)]; }
    cplx& coeff(int i, int j) { return c[idx(i, j)]; }

    Jet2 operator-() const {
        Jet2 r;
        for (int k = 0; k < kSize; ++k) r.c[k] = -c[k];
        return r;
    }
    Jet2& operator+=(const Jet2& o) {
        for (int k = 0; k < kSize; ++k) c[k] += o.c[k];
        return *this;
    }
    Jet2& operator-=(const Jet2& o) {
        for (int k = 0; k < kSize; ++k) c[k] -= o.c[k];
        return *this;
    }
    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator+(Jet2 a, cplx b) { a.c[0] += b; return a; }
    friend Jet2 operator+(cplx b, Jet2 a) { a.c[0] += b; return a; }
    friend Jet2 operator-(Jet2 a, cplx b) { a.c[0] -= b; return a; }
    friend Jet2 operator-(cplx b, const Jet2& a) { return Jet2(b) - a; }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r;
        for (int i = 0; i <= D; ++i)
            for (int j = 0; j <= D - i; ++j) {
                cplx av = a.c[idx(i, j)];
                if (av == 0.0) continue;
                for (int k = 0; k + i <= D; ++k)
                    for (int l = 0; k + l + i + j <= D; ++l) {
                        cplx bv = b.c[idx(k, l)];
                        if (bv == 0.0) continue;
                        r.c[idx(i + k, j + l)] += av * bv;
                    }
            }
        return r;
    }
    friend Jet2 operator*(Jet2 a, cplx s) {
        for (int k = 0; k < kSize; ++k) a.c[k] *= s;
        return a;
    }
    friend Jet2 operator*(cplx s, Jet2 a) { return a * s; }
    friend Jet2 operator*(Jet2 a, double s) { return a * cplx(s); }
    friend Jet2 operator*(double s, Jet2 a) { return a * cplx(s); }

    Jet2 reciprocal() const {
        if (c[0] == 0.0) throw std::domain_error("Jet2: reciprocal of zero");
        Jet2 x(1.0 / c[0]);
        // Newton: x <- x(2 - a x); doubles correct order each step
        int order = 1;
        while (order <= D) {
            x = x * (Jet2(2.0) - (*this) * x);
            order *= 2;
        }
        return x;
    }
    friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * b.reciprocal(); }
    friend Jet2 operator/(Jet2 a, cplx s) { return a * (1.0 / s); }
    friend Jet2 operator/(cplx s, const Jet2& b) { return Jet2(s) * b.reciprocal(); }
    friend Jet2 operator/(Jet2 a, double s) { return a * cplx(1.0 / s); }
    friend Jet2 operator/(double s, const Jet2& b) { return Jet2(cplx(s)) * b.reciprocal(); }

    // derivative series d/du, d/dv (degree drops by one; top coefficients zero)
    Jet2 du() const {
        Jet2 r;
        for (int i = 1; i <= D; ++i)
            for (int j = 0; j <= D - i; ++j)
                r.c[idx(i - 1, j)] = double(i) * c[idx(i, j)];
        return r;
    }
    Jet2 dv() const {
        Jet2 r;
        for (int i = 0; i <= D; ++i)
            for (int j = 1; j <= D - i; ++j)
                r.c[idx(i, j - 1)] = double(j) * c[idx(i, j)];
        return r;
    }

    // coefficient-wise conjugation: equals the analytic continuation of the
    // conjugate function when the expansion point and directions are real
    Jet2 bar() const {
        Jet2 r;
        for (int k = 0; k < kSize; ++k) r.c[k] = std::conj(c[k]);
        return r;
    }

    std::array<cplx, kSize> c;
};

namespace detail {
template <int D, typename F>
Jet2<D> compose_taylor(const Jet2<D>& s, F&& dcoeff) {
    // sum_k dcoeff(k)/k! * h^k, h = s - s0
    Jet2<D> h = s;
    h.c[0] = 0.0;
    Jet2<D> out, term(1.0);
    double fact = 1.0;
    for (int k = 0; k <= D; ++k) {
        if (k > 0) {
            fact *= k;
            term = term * h;
        }
        out += term * (dcoeff(k) / fact);
    }
    return out;
}
}  // namespace detail

template <int D>
Jet2<D> sin(const Jet2<D>& s) {
    cplx a0 = s.val();
    return detail::compose_taylor(s, [a0](int k) {
        switch (k % 4) {
            case 0: return std::sin(a0);
            case 1: return std::cos(a0);
            case 2: return -std::sin(a0);
            default: return -std::cos(a0);
        }
    });
}

template <int D>
Jet2<D> cos(const Jet2<D>& s) {
    cplx a0 = s.val();
    return detail::compose_taylor(s, [a0](int k) {
        switch (k % 4) {
            case 0: return std::cos(a0);
            case 1: return -std::sin(a0);
            case 2: return -std::cos(a0);
            default: return std::sin(a0);
        }
    });
}

template <int D>
Jet2<D> exp(const Jet2<D>& s) {
    cplx e0 = std::exp(s.val());
    return detail::compose_taylor(s, [e0](int) { return e0; });
}

template <int D>
Jet2<D> sqrt(const Jet2<D>& s) {
    cplx r0 = std::sqrt(s.val());
    if (r0 == 0.0) throw std::domain_error("Jet2: sqrt at branch point");
    Jet2<D> x(r0);
    int order = 1;
    while (order <= D) {
        x = 0.5 * (x + s / x);
        order *= 2;
    }
    return x;
}

template <int D>
Jet2<D> pow_int(const Jet2<D>& s, int n) {
    if (n == 0) return Jet2<D>(1.0);
    if (n < 0) return pow_int(s, -n).reciprocal();
    Jet2<D> r(1.0), b = s;
    while (n) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

// real-power of a series with positive real leading value
template <int D>
Jet2<D> pow_real(const Jet2<D>& s, double p) {
    cplx a0 = s.val();
    Jet2<D> h = s / a0 - cplx(1.0);
    // (1+h)^p via binomial series
    Jet2<D> out(1.0), term(1.0);
    double coef = 1.0;
    for (int k = 1; k <= D; ++k) {
        coef *= (p - (k - 1)) / k;
        term = term * h;
        out += term * coef;
    }
    return out * std::pow(a0, p);
}

using Jet = Jet2<1>;  // value + first partials, the workhorse for grid packs

}  // namespace ktk
