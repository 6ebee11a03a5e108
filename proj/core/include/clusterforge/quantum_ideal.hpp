#ifndef CLUSTERFORGE_QUANTUM_IDEAL_HPP
#define CLUSTERFORGE_QUANTUM_IDEAL_HPP

namespace clusterforge {

// Riemann zeta for real s != 1 (Euler-Maclaurin, reflection below 0).
double riemann_zeta(double s);

struct PolylogResult {
    double value = 0.0;
    double remainder = 0.0; // bound on the truncation error
};

// Li_s(x) = sum x^k / k^s for s > 0, 0 <= x <= 1 (x = 1 needs s > 1).
// Direct series with an integral-comparison tail for moderate x; the
// expansion in lambda = -log x near x = 1. Throws divergence via model_error.
PolylogResult polylog(double s, double x);

struct QuantumParams {
    int d = 3;
    double beta = 1.0;
    double U_norm = 0.0; // L1 norm of the pair potential
    double B = 0.0;      // stability constant
    bool bosons = true;  // reporting only; the criterion is statistics-blind
};

// margin = a - (beta U_norm / (4 pi beta)^{d/2}) Li_{d/2}(z e^{a + beta B});
// -infinity when the series diverges (not certifiable at this a).
double criterion_margin(const QuantumParams& p, double z, double a);

struct ZmaxClosed {
    double value = 0.0;
    double born_d3 = 0.0; // d = 3 only: exp(-(zeta(3/2)/sqrt(pi)) a0/sqrt(beta))
    bool born_available = false;
};

// d >= 3: exp(-beta [U_norm zeta(d/2) / (4 pi beta)^{d/2} + B]), the value of
// z at the a with z e^{a + beta B} = 1.
ZmaxClosed zmax_closed(const QuantumParams& p);

struct ZmaxOptimized {
    double z_max = 0.0;
    double a_opt = 0.0;
    bool bracket_ok = true;
};

// Largest certifiable z over a in [1e-6, 20] by golden-section search.
ZmaxOptimized zmax_optimized(const QuantumParams& p);

} // namespace clusterforge

#endif
