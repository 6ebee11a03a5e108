#include "clusterforge/quantum_ideal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "clusterforge/errors.hpp"

namespace clusterforge {

double riemann_zeta(double s) {
    if (s == 1.0) throw std::invalid_argument("zeta pole at s = 1");
    if (s == 0.0) return -0.5; // reflection would hit the pole
    if (s < 0.5) {
        // reflection: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
        return std::pow(2.0, s) * std::pow(M_PI, s - 1.0) * std::sin(M_PI * s / 2.0) *
               std::tgamma(1.0 - s) * riemann_zeta(1.0 - s);
    }
    // Euler-Maclaurin
    constexpr int N = 20;
    static const double bern[] = {1.0 / 6,   -1.0 / 30,    1.0 / 42,  -1.0 / 30,
                                  5.0 / 66,  -691.0 / 2730, 7.0 / 6};
    double sum = 0.0;
    for (int k = 1; k < N; ++k) sum += std::pow(k, -s);
    sum += std::pow(N, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(N, -s);
    double poch = s;        // s (s+1) ... (s+2j-2)
    double npow = std::pow(N, -s - 1.0);
    double fact = 2.0;      // (2j)!
    for (int j = 1; j <= 7; ++j) {
        sum += bern[j - 1] / fact * poch * npow;
        poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        npow /= static_cast<double>(N) * N;
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    return sum;
}

PolylogResult polylog(double s, double x) {
    if (s <= 0.0) throw std::invalid_argument("polylog needs s > 0");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("polylog needs 0 <= x <= 1");
    if (x == 0.0) return {0.0, 0.0};
    if (x == 1.0) {
        if (s <= 1.0) throw model_error("polylog diverges at x = 1 for s <= 1");
        return {riemann_zeta(s), 1e-13};
    }
    if (x <= 0.98) {
        // direct series; tail after K terms below x^{K+1} (K+1)^{-s} / (1-x)
        double sum = 0.0;
        double xk = 1.0;
        double bound = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 5000000; ++k) {
            xk *= x;
            sum += xk / std::pow(k, s);
            bound = xk * x / (std::pow(k + 1, s) * (1.0 - x));
            if (bound < 1e-12) break;
        }
        return {sum, bound};
    }
    // x near 1: expansion in lambda = -log x (convergent for lambda < 2 pi)
    const double lambda = -std::log(x);
    const long si = std::lround(s);
    const bool integral = std::abs(s - static_cast<double>(si)) < 1e-12;
    if (integral && si == 1) return {-std::log1p(-x), 1e-15};
    double sum;
    if (integral) {
        // (-lambda)^{s-1}/(s-1)! (H_{s-1} - log lambda)
        double h = 0.0, f = 1.0, pw = 1.0;
        for (long i = 1; i <= si - 1; ++i) {
            h += 1.0 / i;
            f *= i;
            pw *= -lambda;
        }
        sum = pw / f * (h - std::log(lambda));
    } else {
        sum = std::tgamma(1.0 - s) * std::pow(lambda, s - 1.0);
    }
    double term = 1.0; // (-lambda)^k / k!
    for (int k = 0; k <= 200; ++k) {
        if (!(integral && k == si - 1)) {
            const double contrib = riemann_zeta(s - k) * term;
            sum += contrib;
            if (k > 2 && std::abs(contrib) < 1e-17) break;
        }
        term *= -lambda / (k + 1);
    }
    return {sum, 1e-13};
}

namespace {

double coupling(const QuantumParams& p) {
    return p.beta * p.U_norm / std::pow(4.0 * M_PI * p.beta, p.d / 2.0);
}

} // namespace

double criterion_margin(const QuantumParams& p, double z, double a) {
    const double s = p.d / 2.0;
    const double arg = z * std::exp(a + p.beta * p.B);
    if (arg > 1.0 + 1e-14 || (arg >= 1.0 - 1e-15 && s <= 1.0))
        return -std::numeric_limits<double>::infinity();
    const double c = coupling(p);
    if (c == 0.0) return a;
    return a - c * polylog(s, std::min(arg, 1.0)).value;
}

ZmaxClosed zmax_closed(const QuantumParams& p) {
    if (p.d < 3)
        throw std::invalid_argument("closed form needs d >= 3; use zmax_optimized");
    ZmaxClosed out;
    const double s = p.d / 2.0;
    out.value = std::exp(
        -p.beta * (p.U_norm * riemann_zeta(s) / std::pow(4.0 * M_PI * p.beta, s) + p.B));
    if (p.d == 3) {
        const double a0 = p.U_norm / (8.0 * M_PI);
        out.born_d3 =
            std::exp(-(riemann_zeta(1.5) / std::sqrt(M_PI)) * a0 / std::sqrt(p.beta));
        out.born_available = true;
    }
    return out;
}

namespace {

// largest x in [0,1] with Li_s(x) <= target
double polylog_inverse(double s, double target) {
    if (target <= 0.0) return 0.0;
    if (s > 1.0 && riemann_zeta(s) <= target) return 1.0;
    double lo = 0.0, hi = 1.0 - 1e-16;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (polylog(s, mid).value <= target ? lo : hi) = mid;
    }
    return lo;
}

} // namespace

ZmaxOptimized zmax_optimized(const QuantumParams& p) {
    ZmaxOptimized out;
    const double c = coupling(p);
    if (c == 0.0) {
        // free gas: the admissible region is z e^{a + beta B} <= 1 at any a
        out.z_max = std::exp(-p.beta * p.B);
        out.a_opt = 0.0;
        return out;
    }
    const double s = p.d / 2.0;
    const auto admissible_z = [&](double a) {
        return polylog_inverse(s, a / c) * std::exp(-(a + p.beta * p.B));
    };
    double lo = 1e-6, hi = 20.0;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = admissible_z(x1), f2 = admissible_z(x2);
    for (int it = 0; it < 120; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = admissible_z(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = admissible_z(x1);
        }
    }
    out.a_opt = 0.5 * (lo + hi);
    out.z_max = admissible_z(out.a_opt);
    // the a with z e^{a + beta B} = 1 is feasible for d >= 3; never fall below it
    if (p.d >= 3) {
        const double a_star = c * riemann_zeta(s);
        if (a_star >= 1e-6 && a_star <= 20.0) {
            const double z_star = admissible_z(a_star);
            if (z_star > out.z_max) {
                out.z_max = z_star;
                out.a_opt = a_star;
            }
        }
    }
    out.bracket_ok = out.a_opt < 20.0 - 1e-3;
    return out;
}

} // namespace clusterforge
