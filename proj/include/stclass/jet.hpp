#pragma once

#include <array>
#include <cmath>
#include <cstdlib>

#include "stclass/error.hpp"
#include "stclass/multi_index.hpp"

namespace stc {

/// Truncated Taylor expansion of a scalar function of 4 coordinates at a
/// point, carried to total order 3. Coefficients are Taylor-normalized:
/// coeff(alpha) = d^alpha f / alpha!, so multiplication is a plain truncated
/// convolution and partial() recovers derivatives by multiplying with alpha!.
class Jet3 {
public:
    Jet3() = default; // zero jet

    static Jet3 constant(double v) {
        Jet3 j;
        j.c_[0] = v;
        return j;
    }

    /// Jet of the coordinate function x^axis at the given value.
    static Jet3 variable(int axis, double value) {
        if (axis < 0 || axis >= kJetVars) throw eval_error("jet variable axis out of range 0..3");
        Jet3 j;
        j.c_[0] = value;
        j.c_[static_cast<std::size_t>(unit_slot(axis))] = 1.0;
        return j;
    }

    double value() const { return c_[0]; }
    double coeff(int slot) const { return c_[static_cast<std::size_t>(slot)]; }
    double& coeff(int slot) { return c_[static_cast<std::size_t>(slot)]; }

    double coeff(const MultiIndex& m) const {
        const int s = slot_index(m);
        if (s < 0) throw eval_error("multi-index order exceeds 3");
        return c_[static_cast<std::size_t>(s)];
    }

    /// d^alpha f at the expansion point, i.e. alpha! * coeff(alpha).
    double partial(const MultiIndex& m) const {
        const int s = slot_index(m);
        if (s < 0) throw eval_error("multi-index order exceeds 3");
        return static_cast<double>(detail::kSlotFactorial[static_cast<std::size_t>(s)]) *
               c_[static_cast<std::size_t>(s)];
    }

    /// The jet of df/dx^axis. Exact to total order 2; order-3 slots are zero.
    Jet3 partial_jet(int axis) const {
        Jet3 out;
        for (int s = 0; s < kJetSize; ++s) {
            MultiIndex m = slot_multi_index(s);
            if (m.order() >= kJetOrder) continue;
            m.e[static_cast<std::size_t>(axis)] += 1;
            out.c_[static_cast<std::size_t>(s)] =
                static_cast<double>(m.e[static_cast<std::size_t>(axis)]) * coeff(m);
        }
        return out;
    }

    Jet3 operator-() const {
        Jet3 out;
        for (int s = 0; s < kJetSize; ++s) out.c_[s] = -c_[s];
        return out;
    }

    Jet3& operator+=(const Jet3& o) {
        for (int s = 0; s < kJetSize; ++s) c_[s] += o.c_[s];
        return *this;
    }
    Jet3& operator-=(const Jet3& o) {
        for (int s = 0; s < kJetSize; ++s) c_[s] -= o.c_[s];
        return *this;
    }
    Jet3& operator*=(double k) {
        for (int s = 0; s < kJetSize; ++s) c_[s] *= k;
        return *this;
    }

    friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
    friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
    friend Jet3 operator+(Jet3 a, double b) {
        a.c_[0] += b;
        return a;
    }
    friend Jet3 operator+(double a, Jet3 b) {
        b.c_[0] += a;
        return b;
    }
    friend Jet3 operator-(Jet3 a, double b) {
        a.c_[0] -= b;
        return a;
    }
    friend Jet3 operator-(double a, const Jet3& b) {
        Jet3 out = -b;
        out.c_[0] += a;
        return out;
    }
    friend Jet3 operator*(Jet3 a, double k) { return a *= k; }
    friend Jet3 operator*(double k, Jet3 a) { return a *= k; }
    friend Jet3 operator/(Jet3 a, double k) { return a *= 1.0 / k; }

    friend Jet3 operator*(const Jet3& a, const Jet3& b) {
        Jet3 out;
        for (const auto& t : detail::kProductTable) out.c_[t.dst] += a.c_[t.a] * b.c_[t.b];
        return out;
    }

    /// The unique jet c with b*c = a through order 3. Solved slot by slot in
    /// degree order: every split with a nonzero divisor exponent lands on a
    /// strictly lower degree, which is already known.
    friend Jet3 operator/(const Jet3& a, const Jet3& b) {
        if (b.c_[0] == 0.0) throw eval_error("division by a jet with zero value part");
        Jet3 out;
        for (int dst = 0; dst < kJetSize; ++dst) {
            double acc = a.c_[static_cast<std::size_t>(dst)];
            for (int p = detail::kProductRange[dst]; p < detail::kProductRange[dst + 1]; ++p) {
                const auto& t = detail::kProductTable[static_cast<std::size_t>(p)];
                if (t.a == 0) continue;
                acc -= b.c_[t.a] * out.c_[t.b];
            }
            out.c_[static_cast<std::size_t>(dst)] = acc / b.c_[0];
        }
        return out;
    }

    friend Jet3 operator/(double a, const Jet3& b) { return constant(a) / b; }

private:
    std::array<double, kJetSize> c_{};

    /// f(a) for univariate smooth f with derivatives d0..d3 at a's value.
    /// Writes f(a0 + h) = d0 + d1 h + d2/2 h^2 + d3/6 h^3; exact at order 3
    /// because h has no constant term.
    static Jet3 compose(const Jet3& a, double d0, double d1, double d2, double d3) {
        Jet3 h = a;
        h.c_[0] = 0.0;
        const Jet3 h2 = h * h;
        const Jet3 h3 = h2 * h;
        Jet3 out = h3 * (d3 / 6.0);
        out += h2 * (d2 / 2.0);
        out += h * d1;
        out.c_[0] += d0;
        return out;
    }

    friend Jet3 sin(const Jet3& a) {
        const double v = a.value();
        return compose(a, std::sin(v), std::cos(v), -std::sin(v), -std::cos(v));
    }
    friend Jet3 cos(const Jet3& a) {
        const double v = a.value();
        return compose(a, std::cos(v), -std::sin(v), -std::cos(v), std::sin(v));
    }
    friend Jet3 exp(const Jet3& a) {
        const double e = std::exp(a.value());
        return compose(a, e, e, e, e);
    }
    friend Jet3 log(const Jet3& a) {
        const double v = a.value();
        if (!(v > 0.0)) throw eval_error("log of a jet with non-positive value part");
        return compose(a, std::log(v), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
    }
    friend Jet3 sinh(const Jet3& a) {
        const double v = a.value();
        return compose(a, std::sinh(v), std::cosh(v), std::sinh(v), std::cosh(v));
    }
    friend Jet3 cosh(const Jet3& a) {
        const double v = a.value();
        return compose(a, std::cosh(v), std::sinh(v), std::cosh(v), std::sinh(v));
    }
    friend Jet3 sqrt(const Jet3& a) {
        const double v = a.value();
        if (!(v > 0.0)) throw eval_error("sqrt of a jet with non-positive value part");
        const double r = std::sqrt(v);
        return compose(a, r, 0.5 / r, -0.25 / (v * r), 0.375 / (v * v * r));
    }

    /// Integer exponents by repeated multiplication, everything else through
    /// exp(p * log(a)).
    friend Jet3 pow(const Jet3& a, double p) {
        const double r = std::nearbyint(p);
        if (p == r && std::abs(r) <= 32.0) {
            long n = static_cast<long>(r);
            if (n == 0) return constant(1.0);
            const bool neg = n < 0;
            n = std::labs(n);
            Jet3 acc = a;
            for (long i = 1; i < n; ++i) acc = acc * a;
            return neg ? constant(1.0) / acc : acc;
        }
        return exp(log(a) * p);
    }
};

using JetMat4 = std::array<std::array<Jet3, 4>, 4>;

/// Inverse of a 4x4 jet matrix by Gaussian elimination over the jet ring,
/// pivoting on value parts. G * inverse(G) = identity through order 3.
inline JetMat4 jet_matrix_inverse(const JetMat4& g) {
    JetMat4 a = g;
    JetMat4 inv{};
    for (int i = 0; i < 4; ++i) inv[i][i] = Jet3::constant(1.0);

    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col].value()) > std::abs(a[pivot][col].value())) pivot = r;
        if (a[pivot][col].value() == 0.0)
            throw eval_error("jet matrix is singular at the expansion point");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);

        const Jet3 d = a[col][col];
        for (int c = 0; c < 4; ++c) {
            a[col][c] = a[col][c] / d;
            inv[col][c] = inv[col][c] / d;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const Jet3 f = a[r][col];
            for (int c = 0; c < 4; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

/// First-order jet (value plus gradient). Used where only values of first
/// derivatives are needed, e.g. Christoffel symbols along a geodesic.
struct Dual4 {
    double v = 0.0;
    std::array<double, 4> d{};

    static Dual4 constant(double x) { return Dual4{x, {}}; }
    static Dual4 variable(int axis, double x) {
        Dual4 out{x, {}};
        out.d[static_cast<std::size_t>(axis)] = 1.0;
        return out;
    }

    Dual4 operator-() const { return {-v, {-d[0], -d[1], -d[2], -d[3]}}; }

    friend Dual4 operator+(const Dual4& a, const Dual4& b) {
        return {a.v + b.v, {a.d[0] + b.d[0], a.d[1] + b.d[1], a.d[2] + b.d[2], a.d[3] + b.d[3]}};
    }
    friend Dual4 operator-(const Dual4& a, const Dual4& b) {
        return {a.v - b.v, {a.d[0] - b.d[0], a.d[1] - b.d[1], a.d[2] - b.d[2], a.d[3] - b.d[3]}};
    }
    friend Dual4 operator*(const Dual4& a, const Dual4& b) {
        return {a.v * b.v,
                {a.v * b.d[0] + a.d[0] * b.v, a.v * b.d[1] + a.d[1] * b.v,
                 a.v * b.d[2] + a.d[2] * b.v, a.v * b.d[3] + a.d[3] * b.v}};
    }
    friend Dual4 operator/(const Dual4& a, const Dual4& b) {
        if (b.v == 0.0) throw eval_error("division by a value of zero");
        const double inv = 1.0 / b.v;
        const double q = a.v * inv;
        return {q,
                {(a.d[0] - q * b.d[0]) * inv, (a.d[1] - q * b.d[1]) * inv,
                 (a.d[2] - q * b.d[2]) * inv, (a.d[3] - q * b.d[3]) * inv}};
    }
    friend Dual4 operator+(Dual4 a, double k) {
        a.v += k;
        return a;
    }
    friend Dual4 operator+(double k, Dual4 a) {
        a.v += k;
        return a;
    }
    friend Dual4 operator-(Dual4 a, double k) {
        a.v -= k;
        return a;
    }
    friend Dual4 operator-(double k, const Dual4& a) { return -a + k; }
    friend Dual4 operator*(Dual4 a, double k) {
        a.v *= k;
        for (auto& x : a.d) x *= k;
        return a;
    }
    friend Dual4 operator*(double k, Dual4 a) { return a * k; }
    friend Dual4 operator/(Dual4 a, double k) { return a * (1.0 / k); }
    friend Dual4 operator/(double k, const Dual4& b) { return Dual4::constant(k) / b; }

    friend Dual4 chain(const Dual4& a, double f, double fp) {
        return {f, {fp * a.d[0], fp * a.d[1], fp * a.d[2], fp * a.d[3]}};
    }
    friend Dual4 sin(const Dual4& a) { return chain(a, std::sin(a.v), std::cos(a.v)); }
    friend Dual4 cos(const Dual4& a) { return chain(a, std::cos(a.v), -std::sin(a.v)); }
    friend Dual4 exp(const Dual4& a) {
        const double e = std::exp(a.v);
        return chain(a, e, e);
    }
    friend Dual4 log(const Dual4& a) {
        if (!(a.v > 0.0)) throw eval_error("log of a non-positive value");
        return chain(a, std::log(a.v), 1.0 / a.v);
    }
    friend Dual4 sinh(const Dual4& a) { return chain(a, std::sinh(a.v), std::cosh(a.v)); }
    friend Dual4 cosh(const Dual4& a) { return chain(a, std::cosh(a.v), std::sinh(a.v)); }
    friend Dual4 sqrt(const Dual4& a) {
        if (!(a.v > 0.0)) throw eval_error("sqrt of a non-positive value");
        const double r = std::sqrt(a.v);
        return chain(a, r, 0.5 / r);
    }
    friend Dual4 pow(const Dual4& a, double p) {
        const double r = std::nearbyint(p);
        if (p == r && std::abs(r) <= 32.0) {
            long n = static_cast<long>(r);
            if (n == 0) return constant(1.0);
            const bool neg = n < 0;
            n = std::labs(n);
            Dual4 acc = a;
            for (long i = 1; i < n; ++i) acc = acc * a;
            return neg ? constant(1.0) / acc : acc;
        }
        return exp(log(a) * p);
    }
};

} // namespace stc
