#ifndef CLUSTERFORGE_CLASSICAL_HPP
#define CLUSTERFORGE_CLASSICAL_HPP

#include <cstdint>
#include <vector>

namespace clusterforge {

// Translation-invariant pair potential: hard core of radius r plus an
// integrable radial tail. Built-in families: pure hard core and square well.
struct PairPotential {
    enum class Family { hard_core_only, square_well };

    int d = 1;
    Family family = Family::hard_core_only;
    double r = 1.0;          // hard-core radius (U = +inf inside), >= 0
    double well_depth = 0.0; // square well: U = -depth on (r, range)
    double well_range = 0.0;
    double B = 0.0;          // stability constant
    double beta = 1.0;
    double z = 0.0;          // fugacity

    static PairPotential hard_rods(double sigma, double z);
    static PairPotential square_well(int d, double r, double depth, double range,
                                     double B, double beta, double z);

    double tail(double s) const;              // U(s) for s > r
    double tail_abs_integral() const;         // integral over |y| > r of |U|
    double tail_cutoff() const;               // radius beyond which U = 0
};

double ball_volume(int d); // unit-ball volume pi^{d/2} / Gamma(d/2+1)

// integral over R^d of |e^{-beta U(y)} - 1|; hard core contributes the ball
// volume exactly, the tail by adaptive radial quadrature (abs tol 1e-8).
double mayer_norm_integral(const PairPotential& p);

enum class ClassicalMode { rue, brf };

struct ClassicalCriterion {
    double z_max = 0.0;
    double margin = 0.0; // z_max - p.z
    bool unbounded = false;
};

// rue: z e^{2 beta B} * mayer_norm_integral <= a e^{-a} at a = 1;
// brf: z e^{beta B} (ball r^d + beta * tail_abs_integral) <= e^{-1}.
ClassicalCriterion criterion_classical(const PairPotential& p, ClassicalMode mode);

// Exact coefficient of z^n in the pressure series for 1D hard rods of
// length sigma, via signed polytope volumes per connected graph. n <= 5.
double mayer_coefficient_exact1d(double sigma, int n);

struct MayerEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long long samples = 0;
};

// Monte Carlo estimate of the same coefficient for general (d, potential):
// spanning-tree importance sampling from the normalized |f| density with
// antithetic pairing; deterministic given (seed, samples, threads).
MayerEstimate mayer_coefficient_mc(const PairPotential& p, int n, std::uint64_t seed,
                                   long long samples, int threads = 1);

struct PressureSum {
    double value = 0.0;                 // sum of b_n z^n, n <= N
    std::vector<double> coefficients;   // b_1..b_N
    double tonks_reference = 0.0;       // exact 1D hard-rod pressure, if applicable
    bool tonks_available = false;
};

// Partial pressure sum from exact 1D coefficients; the Tonks equation of
// state w e^{sigma w} = z is solved by bisection as an independent reference.
PressureSum pressure_partial_sum(const PairPotential& p, int N);

// Exact 1D hard-rod pressure: the root w of w e^{sigma w} = z.
double tonks_pressure(double sigma, double z);

struct DecayConstants {
    double C1 = 0.0;    // L1 norm of e^{kappa |y|} |e^{-beta U(y)} - 1|
    double Cinf = 0.0;  // sup norm of the same
    double prefactor = 0.0;
    bool ok = false;        // z e^{1 + 2 beta B} C1 < 1
    bool applicable = true; // C1 finite for the given kappa
};

DecayConstants decay_constants(const PairPotential& p, double kappa);

} // namespace clusterforge

#endif
