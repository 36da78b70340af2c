#pragma once

#include <stdexcept>
#include <utility>

namespace puccilab {

// Uniform ellipticity constants 0 < lambda <= Lambda.
struct EllipticityPair {
    double lambda = 1.0;
    double Lambda = 1.0;

    EllipticityPair() = default;
    EllipticityPair(double lam, double Lam) : lambda(lam), Lambda(Lam) {
        if (!(lam > 0.0 && lam <= Lam))
            throw std::invalid_argument("EllipticityPair: need 0 < lambda <= Lambda");
    }
};

// Symmetric 2x2 matrix.
struct Sym2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;

    static Sym2 diag(double d1, double d2) { return {d1, 0.0, d2}; }
    double trace() const { return a11 + a22; }
    double norm() const;  // Frobenius
};

// Closed-form eigenvalues, sorted ascending.
std::pair<double, double> eigenvalues(const Sym2& m);

// M+(m) = Lambda * sum e_i^+  -  lambda * sum e_i^-
double pucci_plus(const Sym2& m, const EllipticityPair& ell);
// M-(m) = lambda * sum e_i^+  -  Lambda * sum e_i^-
double pucci_minus(const Sym2& m, const EllipticityPair& ell);

// Independent oracle: sup/inf of trace(A m) over A = R^T diag(a,b) R with
// a, b in [lambda, Lambda]. Endpoint values of (a, b) are always on the grid.
std::pair<double, double> pucci_bruteforce(const Sym2& m, const EllipticityPair& ell,
                                           int n_samples);

}  // namespace puccilab
