#include "nevdiff/special.hpp"

#include <cmath>

#include "nevdiff/errors.hpp"

namespace nevdiff {

double elliptic_K(double k) {
    if (!(k >= 0.0) || k >= 1.0)
        throw DomainError("elliptic_K: modulus must satisfy 0 <= k < 1");
    double a = 1.0;
    double b = std::sqrt(1.0 - k * k);
    for (int i = 0; i < 60; ++i) {
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        a = an;
        b = bn;
        if (std::abs(a - b) <= 1e-16 * a) break;
    }
    return M_PI / (2.0 * a);
}

// A&S 16.4: AGM scale, then unwind the amplitude with the descending
// Landen angles phi_{n-1} determined by tan(phi_{n-1} - phi_n) relation
// in its arcsin form.
JacobiReal jacobi_sncndn(double u, double k) {
    if (!(k > 0.0) || k >= 1.0)
        throw DomainError("jacobi_sncndn: modulus must satisfy 0 < k < 1");

    // Reduce by the real period 4K; sn/cn flip sign under a 2K shift.
    const double K = elliptic_K(k);
    double sign = 1.0;
    double ur = std::remainder(u, 4.0 * K);
    if (ur > 2.0 * K) {
        ur -= 2.0 * K;
        sign = -1.0;
    } else if (ur < -2.0 * K) {
        ur += 2.0 * K;
        sign = -1.0;
    }

    double a[32], c[32];
    a[0] = 1.0;
    double b = std::sqrt(1.0 - k * k);
    c[0] = k;
    int n = 0;
    while (n < 30 && std::abs(c[n]) > 1e-16 * a[n]) {
        double an = 0.5 * (a[n] + b);
        double cn1 = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
        a[n] = an;
        c[n] = cn1;
    }
    double phi = std::ldexp(1.0, n) * a[n] * ur;
    for (int i = n; i >= 1; --i) {
        double s = c[i] / a[i] * std::sin(phi);
        s = std::fmin(1.0, std::fmax(-1.0, s));
        phi = 0.5 * (phi + std::asin(s));
    }
    JacobiReal j;
    j.sn = sign * std::sin(phi);
    j.cn = sign * std::cos(phi);
    double dn2 = 1.0 - k * k * j.sn * j.sn;
    j.dn = std::sqrt(std::fmax(dn2, 0.0));
    return j;
}

Complex jacobi_sn(Complex z, double k) {
    const double K = elliptic_K(k);
    const double kp = std::sqrt(1.0 - k * k);
    const double Kp = elliptic_K(kp);

    // Reduce by the genuine periods 4K (real) and 2iK' (imaginary). The
    // addition formula below is exactly invariant under both reductions,
    // so periodicity survives in floating point.
    double x = std::remainder(z.real(), 4.0 * K);
    double y = std::remainder(z.imag(), 2.0 * Kp);

    JacobiReal jx = jacobi_sncndn(x, k);
    if (y == 0.0) return Complex(jx.sn, 0.0);
    JacobiReal jy = jacobi_sncndn(y, kp);

    double den = jy.cn * jy.cn + k * k * jx.sn * jx.sn * jy.sn * jy.sn;
    return Complex(jx.sn * jy.dn, jx.cn * jx.dn * jy.sn * jy.cn) / den;
}

void Lattice::coords(Complex z, double& x, double& y) const {
    Complex p1 = 2.0 * w1, p2 = 2.0 * w2;
    double det = p1.real() * p2.imag() - p1.imag() * p2.real();
    x = (z.real() * p2.imag() - z.imag() * p2.real()) / det;
    y = (p1.real() * z.imag() - p1.imag() * z.real()) / det;
}

Complex Lattice::reduce(Complex z, long& m, long& n) const {
    double x, y;
    coords(z, x, y);
    m = std::lround(x);
    n = std::lround(y);
    return z - 2.0 * static_cast<double>(m) * w1 - 2.0 * static_cast<double>(n) * w2;
}

Complex Lattice::reduce(Complex z) const {
    long m, n;
    return reduce(z, m, n);
}

bool Lattice::near_point(Complex z, double tol) const {
    return std::abs(reduce(z)) <= tol;
}

double Lattice::min_vector_norm() const {
    double best = 1e300;
    for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n) {
            if (m == 0 && n == 0) continue;
            best = std::fmin(best, std::abs(2.0 * double(m) * w1 + 2.0 * double(n) * w2));
        }
    return best;
}

WeierstrassP::WeierstrassP(Complex w1, Complex w2) {
    Complex tau = w2 / w1;
    if (tau.imag() == 0.0)
        throw DomainError("WeierstrassP: w2/w1 must have nonzero imaginary part");
    if (tau.imag() < 0.0) {
        std::swap(w1, w2);
        tau = w2 / w1;
    }
    lat_.w1 = w1;
    lat_.w2 = w2;
    q_ = std::exp(Complex(0, M_PI) * tau);
    t2z_ = theta2(Complex(0, 0));
    t3z_ = theta3(Complex(0, 0));
    t4z_ = theta4(Complex(0, 0));
    Complex h = M_PI / (2.0 * w1);
    pref_ = h * h;
}

// Theta series; |q| < 1 and v reduced, so ~10 terms give full precision.
Complex WeierstrassP::theta1(Complex v) const {
    Complex s(0, 0);
    double sgn = 1.0;
    for (int n = 0; n < 24; ++n) {
        double e = (n + 0.5) * (n + 0.5);
        Complex term = sgn * std::pow(q_, e) * std::sin(double(2 * n + 1) * v);
        s += term;
        if (n > 2 && std::abs(term) < 1e-18 * (1.0 + std::abs(s))) break;
        sgn = -sgn;
    }
    return 2.0 * s;
}

Complex WeierstrassP::theta2(Complex v) const {
    Complex s(0, 0);
    for (int n = 0; n < 24; ++n) {
        double e = (n + 0.5) * (n + 0.5);
        Complex term = std::pow(q_, e) * std::cos(double(2 * n + 1) * v);
        s += term;
        if (n > 2 && std::abs(term) < 1e-18 * (1.0 + std::abs(s))) break;
    }
    return 2.0 * s;
}

Complex WeierstrassP::theta3(Complex v) const {
    Complex s(1, 0);
    for (int n = 1; n < 24; ++n) {
        Complex term = std::pow(q_, double(n) * double(n)) * std::cos(2.0 * double(n) * v);
        s += 2.0 * term;
        if (n > 2 && std::abs(term) < 1e-18 * (1.0 + std::abs(s))) break;
    }
    return s;
}

Complex WeierstrassP::theta4(Complex v) const {
    Complex s(1, 0);
    double sgn = -1.0;
    for (int n = 1; n < 24; ++n) {
        Complex term = sgn * std::pow(q_, double(n) * double(n)) * std::cos(2.0 * double(n) * v);
        s += 2.0 * term;
        if (n > 2 && std::abs(term) < 1e-18 * (1.0 + std::abs(s))) break;
        sgn = -sgn;
    }
    return s;
}

// p(z) = e_k + (pi theta_1'(0) theta_{k+1}(v) / (2 w1 theta_{k+1}(0) theta_1(v)))^2
// for each k; averaging the three identities eliminates the e_k anchor
// because e_1 + e_2 + e_3 = 0, with theta_1'(0) = theta_2 theta_3 theta_4 (0).
Complex WeierstrassP::operator()(Complex z) const {
    Complex zr = lat_.reduce(z);
    Complex v = M_PI * zr / (2.0 * lat_.w1);
    Complex t1 = theta1(v);
    Complex r2 = t3z_ * t4z_ * theta2(v) / t1;
    Complex r3 = t2z_ * t4z_ * theta3(v) / t1;
    Complex r4 = t2z_ * t3z_ * theta4(v) / t1;
    return pref_ * (r2 * r2 + r3 * r3 + r4 * r4) / 3.0;
}

}  // namespace nevdiff
