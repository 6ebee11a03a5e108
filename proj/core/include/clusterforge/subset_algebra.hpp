#ifndef CLUSTERFORGE_SUBSET_ALGEBRA_HPP
#define CLUSTERFORGE_SUBSET_ALGEBRA_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace clusterforge {

using Complex = std::complex<double>;
using Mask = std::uint32_t;

// Complex-valued function on all subsets of {0..n-1}, stored densely by
// bitmask. Carrier of the commutative convolution algebra.
struct SubsetFunction {
    int n = 0;
    std::vector<Complex> values; // size 1 << n

    explicit SubsetFunction(int universe_size);

    Complex& operator[](Mask m) { return values[m]; }
    const Complex& operator[](Mask m) const { return values[m]; }
    std::size_t size() const { return values.size(); }
};

// Unit of the algebra: 1 on the empty set, 0 elsewhere.
SubsetFunction algebra_unit(int n);

// (f*g)(I) = sum over J subset of I of f(J) g(I\J).
SubsetFunction convolve(const SubsetFunction& f, const SubsetFunction& g);

// exp_A f = 1 + f + f^{*2}/2! + ... + f^{*n}/n!; requires f(empty) = 0.
SubsetFunction alg_exp(const SubsetFunction& f);

// Convolution inverse; requires f(empty) != 0.
SubsetFunction alg_inverse(const SubsetFunction& f);

// (D_J f)(I) = f(I ∪ J) if I ∩ J = empty, else 0.
SubsetFunction shift(Mask j, const SubsetFunction& f);

// Symmetric complex pair couplings zeta_ij on {0..n-1}, optionally backed by
// a pair energy u with zeta = e^{-u} - 1 and a hard-core flag where
// zeta = -1 (u formally +infinity; ubar = 1 there).
class ZetaMatrix {
public:
    static ZetaMatrix from_zeta(int n, const std::vector<Complex>& upper); // row-major i<j
    static ZetaMatrix from_u(int n, const std::vector<Complex>& upper_u,
                             const std::vector<bool>& hard_core);

    int size() const { return n_; }
    Complex zeta(int i, int j) const;
    bool hard_core(int i, int j) const;
    bool has_u() const { return has_u_; }
    Complex u(int i, int j) const;    // only meaningful where !hard_core
    Complex ubar(int i, int j) const; // 1 on hard-core pairs, u elsewhere

    double abs_zeta(int i, int j) const { return std::abs(zeta(i, j)); }
    double abs_ubar(int i, int j) const { return std::abs(ubar(i, j)); }

private:
    ZetaMatrix(int n) : n_(n) {}
    int pair_index(int i, int j) const;

    int n_ = 0;
    bool has_u_ = false;
    std::vector<Complex> zeta_;
    std::vector<Complex> u_;
    std::vector<bool> hard_;
};

// Per-index stability weights b_i >= 0.
struct StabilityWeights {
    std::vector<double> b;

    // Checks prod_{i<j in I} |1+zeta_ij| <= prod_{i in I} e^{b_i} over all
    // subsets I.
    bool certify(const ZetaMatrix& z) const;
};

// Phi(I) = sum over connected graphs on I of prod zeta; Psi(I) = prod over
// pairs in I of (1+zeta). Direct graph enumeration; n <= 8.
std::pair<SubsetFunction, SubsetFunction> phi_psi(const ZetaMatrix& z);

// Smallest i in I with prod_{j in I\{i}} |1+zeta_ij| <= e^{2 b_i}.
int select_iota(const ZetaMatrix& z, const StabilityWeights& b, Mask i_set);

enum class KsMode { recursive, direct };
enum class KsHMode { recursive, forest };

// Kirkwood-Salsburg function g(I,J) = (Psi^{*(-1)} * D_I Psi)(J), either by
// the algebra route or by the iota recursion.
Complex ks_g(const ZetaMatrix& z, const StabilityWeights& b, Mask i_set, Mask j_set,
             KsMode mode);

// Dominating function h(I,J); forest mode evaluates the rooted-forest closed
// form with |zeta| weights.
double ks_h(const ZetaMatrix& z, const StabilityWeights& b, Mask i_set, Mask j_set,
            KsHMode mode);

} // namespace clusterforge

#endif
