#ifndef NEVDIFF_SPECIAL_HPP
#define NEVDIFF_SPECIAL_HPP

#include <complex>

namespace nevdiff {

using Complex = std::complex<double>;

// Complete elliptic integral of the first kind, AGM iteration.
// Relative error ~1e-15 for 0 <= k < 1; throws DomainError outside.
double elliptic_K(double k);

// Jacobi elliptic functions of real argument and modulus k in (0,1),
// by the arithmetic-geometric-mean descending transformation.
struct JacobiReal {
    double sn, cn, dn;
};
JacobiReal jacobi_sncndn(double u, double k);

// sn(z, k) for complex z via the imaginary-argument addition formula,
// with argument reduction by the periods 4K and 2iK'. Accurate to ~1e-12
// away from poles; blows up smoothly near poles (no special handling).
Complex jacobi_sn(Complex z, double k);

// Lattice Lambda = {2 m w1 + 2 n w2}. Reduction and coordinates.
struct Lattice {
    Complex w1, w2;  // half-periods; Im(w2/w1) != 0 required

    // Real coordinates (x, y) with z = x * 2 w1 + y * 2 w2.
    void coords(Complex z, double& x, double& y) const;
    // z reduced modulo the lattice to the cell centered at 0; the removed
    // lattice vector is 2*m*w1 + 2*n*w2.
    Complex reduce(Complex z, long& m, long& n) const;
    Complex reduce(Complex z) const;
    // Is z within tol of a lattice point?
    bool near_point(Complex z, double tol) const;
    double min_vector_norm() const;
};

// Weierstrass p-function for the lattice with half-periods w1, w2,
// computed through Jacobi theta series after lattice reduction.
// Uniform accuracy ~1e-12 over the plane (relative near poles).
class WeierstrassP {
public:
    WeierstrassP(Complex w1, Complex w2);

    Complex operator()(Complex z) const;
    const Lattice& lattice() const { return lat_; }

private:
    Lattice lat_;
    Complex q_;         // nome exp(i pi w2/w1)
    Complex t2z_, t3z_, t4z_;  // theta_{2,3,4}(0, q)
    Complex pref_;      // (pi / (2 w1))^2

    Complex theta1(Complex v) const;
    Complex theta2(Complex v) const;
    Complex theta3(Complex v) const;
    Complex theta4(Complex v) const;
};

}  // namespace nevdiff

#endif
