#include "clusterforge/subset_algebra.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "clusterforge/errors.hpp"
#include "clusterforge/graphs.hpp"

namespace clusterforge {

namespace {

constexpr int kMaxUniverse = 12;

void require_same_universe(const SubsetFunction& f, const SubsetFunction& g) {
    if (f.n != g.n)
        throw std::invalid_argument("subset functions live on different universes");
}

} // namespace

SubsetFunction::SubsetFunction(int universe_size) : n(universe_size) {
    if (n < 0 || n > kMaxUniverse)
        throw capacity_error("subset functions support 0 <= n <= 12");
    values.assign(std::size_t{1} << n, Complex{});
}

SubsetFunction algebra_unit(int n) {
    SubsetFunction one(n);
    one[0] = 1.0;
    return one;
}

SubsetFunction convolve(const SubsetFunction& f, const SubsetFunction& g) {
    require_same_universe(f, g);
    SubsetFunction out(f.n);
    const Mask full = static_cast<Mask>(f.size() - 1);
    for (Mask i = 0;; ++i) {
        Complex acc = f[0] * g[i];
        for (Mask j = i; j; j = (j - 1) & i) acc += f[j] * g[i ^ j];
        out[i] = acc;
        if (i == full) break;
    }
    return out;
}

SubsetFunction alg_exp(const SubsetFunction& f) {
    if (f[0] != Complex{})
        throw std::invalid_argument("alg_exp requires f(empty) = 0");
    SubsetFunction out = algebra_unit(f.n);
    SubsetFunction power = algebra_unit(f.n);
    double factorial = 1.0;
    for (int k = 1; k <= f.n; ++k) {
        power = convolve(power, f);
        factorial *= k;
        for (std::size_t m = 0; m < out.size(); ++m)
            out.values[m] += power.values[m] / factorial;
    }
    return out;
}

SubsetFunction alg_inverse(const SubsetFunction& f) {
    if (f[0] == Complex{})
        throw std::domain_error("subset function with f(empty) = 0 has no inverse");
    SubsetFunction inv(f.n);
    const Complex c0 = f[0];
    inv[0] = 1.0 / c0;
    const Mask full = static_cast<Mask>(f.size() - 1);
    // Recursion on subset size: masks in increasing numeric order always see
    // their proper subsets first.
    for (Mask i = 1;; ++i) {
        Complex acc{};
        for (Mask j = i; j; j = (j - 1) & i) acc += f[j] * inv[i ^ j];
        inv[i] = -acc / c0;
        if (i == full) break;
    }
    return inv;
}

SubsetFunction shift(Mask j, const SubsetFunction& f) {
    SubsetFunction out(f.n);
    const Mask full = static_cast<Mask>(f.size() - 1);
    if (j & ~full) throw std::invalid_argument("shift set outside universe");
    for (Mask i = 0;; ++i) {
        out[i] = (i & j) ? Complex{} : f[i | j];
        if (i == full) break;
    }
    return out;
}

int ZetaMatrix::pair_index(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_ || i == j) throw std::invalid_argument("bad pair index");
    // index into the strictly-upper triangle, row-major
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

ZetaMatrix ZetaMatrix::from_zeta(int n, const std::vector<Complex>& upper) {
    ZetaMatrix z(n);
    const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (upper.size() != pairs) throw std::invalid_argument("zeta size mismatch");
    z.zeta_ = upper;
    z.hard_.assign(pairs, false);
    for (std::size_t p = 0; p < pairs; ++p)
        if (upper[p] == Complex{-1.0, 0.0}) z.hard_[p] = true;
    return z;
}

ZetaMatrix ZetaMatrix::from_u(int n, const std::vector<Complex>& upper_u,
                              const std::vector<bool>& hard_core) {
    ZetaMatrix z(n);
    const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (upper_u.size() != pairs || hard_core.size() != pairs)
        throw std::invalid_argument("u size mismatch");
    z.has_u_ = true;
    z.u_ = upper_u;
    z.hard_ = hard_core;
    z.zeta_.resize(pairs);
    for (std::size_t p = 0; p < pairs; ++p)
        z.zeta_[p] = hard_core[p] ? Complex{-1.0, 0.0} : std::exp(-upper_u[p]) - 1.0;
    return z;
}

Complex ZetaMatrix::zeta(int i, int j) const { return zeta_[pair_index(i, j)]; }

bool ZetaMatrix::hard_core(int i, int j) const { return hard_[pair_index(i, j)]; }

Complex ZetaMatrix::u(int i, int j) const {
    if (!has_u_) throw std::logic_error("zeta matrix carries no u");
    return u_[pair_index(i, j)];
}

Complex ZetaMatrix::ubar(int i, int j) const {
    const int p = pair_index(i, j);
    if (hard_[p]) return Complex{1.0, 0.0};
    if (!has_u_) throw std::logic_error("zeta matrix carries no u");
    return u_[p];
}

bool StabilityWeights::certify(const ZetaMatrix& z) const {
    const int n = z.size();
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("stability weight count mismatch");
    const Mask full = (Mask{1} << n) - 1;
    for (Mask i_set = 0;; ++i_set) {
        double log_prod = 0.0;
        double budget = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!(i_set >> i & 1)) continue;
            budget += b[i];
            for (int j = i + 1; j < n; ++j)
                if (i_set >> j & 1) log_prod += std::log(std::abs(1.0 + z.zeta(i, j)));
        }
        if (log_prod > budget + 1e-12) return false;
        if (i_set == full) break;
    }
    return true;
}

namespace {

SubsetFunction psi_only(const ZetaMatrix& z) {
    const int n = z.size();
    SubsetFunction psi(n);
    psi[0] = 1.0;
    const Mask full = (Mask{1} << n) - 1;
    for (Mask i_set = 1; i_set <= full && full != 0; ++i_set) {
        const int low = std::countr_zero(i_set);
        Complex prod = psi[i_set & (i_set - 1)];
        for (int j = low + 1; j < n; ++j)
            if (i_set >> j & 1) prod *= 1.0 + z.zeta(low, j);
        psi[i_set] = prod;
    }
    return psi;
}

} // namespace

std::pair<SubsetFunction, SubsetFunction> phi_psi(const ZetaMatrix& z) {
    const int n = z.size();
    if (n > 8) throw capacity_error("phi_psi enumerates connected graphs; n <= 8");
    SubsetFunction phi(n), psi(n);
    psi[0] = 1.0;
    if (n == 0) return {std::move(phi), std::move(psi)};
    const Mask full = (Mask{1} << n) - 1;
    for (Mask i_set = 1;; ++i_set) {
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (i_set >> i & 1) members.push_back(i);
        const int k = static_cast<int>(members.size());
        // Psi by direct pair product.
        Complex prod = 1.0;
        for (int a = 0; a < k; ++a)
            for (int bb = a + 1; bb < k; ++bb)
                prod *= 1.0 + z.zeta(members[a], members[bb]);
        psi[i_set] = prod;
        // Phi by exhaustive connected-graph enumeration on the subset.
        Complex acc{};
        ConnectedGraphStream graphs(k);
        while (auto g = graphs.next()) {
            Complex term = 1.0;
            for (auto [a, bb] : g->edges) term *= z.zeta(members[a], members[bb]);
            acc += term;
        }
        phi[i_set] = acc;
        if (i_set == full) break;
    }
    return {std::move(phi), std::move(psi)};
}

int select_iota(const ZetaMatrix& z, const StabilityWeights& b, Mask i_set) {
    if (i_set == 0) throw std::invalid_argument("iota of the empty set");
    const int n = z.size();
    for (int i = 0; i < n; ++i) {
        if (!(i_set >> i & 1)) continue;
        double log_prod = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i && (i_set >> j & 1))
                log_prod += std::log(std::abs(1.0 + z.zeta(i, j)));
        if (log_prod <= 2.0 * b.b[i] + 1e-12) return i;
    }
    throw model_error("no index satisfies the iota product bound; stability violated");
}

namespace {

struct KsKey {
    Mask i, j;
    bool operator==(const KsKey&) const = default;
};

struct KsKeyHash {
    std::size_t operator()(const KsKey& k) const {
        return std::hash<std::uint64_t>{}((std::uint64_t{k.i} << 32) | k.j);
    }
};

Complex ks_g_rec(const ZetaMatrix& z, const StabilityWeights& b, Mask i_set, Mask j_set,
                 std::unordered_map<KsKey, Complex, KsKeyHash>& memo) {
    if (i_set == 0) return j_set == 0 ? 1.0 : 0.0;
    const KsKey key{i_set, j_set};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const int n = z.size();
    const int pivot = select_iota(z, b, i_set);
    const Mask i_rest = i_set & ~(Mask{1} << pivot);
    Complex front = 1.0;
    for (int i = 0; i < n; ++i)
        if (i_rest >> i & 1) front *= 1.0 + z.zeta(i, pivot);
    Complex acc{};
    Mask k = j_set;
    for (;;) {
        Complex prod = 1.0;
        for (int i = 0; i < n; ++i)
            if (k >> i & 1) prod *= z.zeta(i, pivot);
        acc += prod * ks_g_rec(z, b, i_rest | k, j_set & ~k, memo);
        if (k == 0) break;
        k = (k - 1) & j_set;
    }
    const Complex value = front * acc;
    memo.emplace(key, value);
    return value;
}

double ks_h_rec(const ZetaMatrix& z, const StabilityWeights& b, Mask i_set, Mask j_set,
                std::unordered_map<KsKey, double, KsKeyHash>& memo) {
    if (i_set == 0) return j_set == 0 ? 1.0 : 0.0;
    const KsKey key{i_set, j_set};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const int n = z.size();
    const int pivot = select_iota(z, b, i_set);
    const Mask i_rest = i_set & ~(Mask{1} << pivot);
    double acc = 0.0;
    Mask k = j_set;
    for (;;) {
        double prod = 1.0;
        for (int i = 0; i < n; ++i)
            if (k >> i & 1) prod *= z.abs_zeta(i, pivot);
        acc += prod * ks_h_rec(z, b, i_rest | k, j_set & ~k, memo);
        if (k == 0) break;
        k = (k - 1) & j_set;
    }
    const double value = std::exp(2.0 * b.b[pivot]) * acc;
    memo.emplace(key, value);
    return value;
}

} // namespace

Complex ks_g(const ZetaMatrix& z, const StabilityWeights& b, Mask i_set, Mask j_set,
             KsMode mode) {
    if (i_set & j_set) throw std::invalid_argument("I and J must be disjoint");
    if (std::popcount(i_set | j_set) > 8)
        throw capacity_error("ks_g supports |I|+|J| <= 8");
    if (mode == KsMode::direct) {
        const SubsetFunction psi = psi_only(z);
        return convolve(alg_inverse(psi), shift(i_set, psi))[j_set];
    }
    std::unordered_map<KsKey, Complex, KsKeyHash> memo;
    return ks_g_rec(z, b, i_set, j_set, memo);
}

double ks_h(const ZetaMatrix& z, const StabilityWeights& b, Mask i_set, Mask j_set,
            KsHMode mode) {
    if (i_set & j_set) throw std::invalid_argument("I and J must be disjoint");
    if (std::popcount(i_set | j_set) > 8)
        throw capacity_error("ks_h supports |I|+|J| <= 8");
    if (mode == KsHMode::recursive) {
        std::unordered_map<KsKey, double, KsKeyHash> memo;
        return ks_h_rec(z, b, i_set, j_set, memo);
    }
    std::vector<int> roots, others;
    for (int i = 0; i < z.size(); ++i) {
        if (i_set >> i & 1) roots.push_back(i);
        else if (j_set >> i & 1) others.push_back(i);
    }
    if (roots.empty()) return j_set == 0 ? 1.0 : 0.0;
    double weight_prefix = 1.0;
    for (int i : roots) weight_prefix *= std::exp(2.0 * b.b[i]);
    for (int i : others) weight_prefix *= std::exp(2.0 * b.b[i]);
    double forest_sum = 0.0;
    RootedForestStream forests(roots, others);
    while (auto f = forests.next()) {
        double prod = 1.0;
        for (auto [i, j] : f->edges) prod *= z.abs_zeta(i, j);
        forest_sum += prod;
    }
    return weight_prefix * forest_sum;
}

} // namespace clusterforge
