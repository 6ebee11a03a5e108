#include "doctest.h"

#include <bit>
#include <cmath>

#include "clusterforge/criteria.hpp"
#include "clusterforge/graphs.hpp"
#include "clusterforge/rng.hpp"
#include "clusterforge/subset_algebra.hpp"

using namespace clusterforge;

namespace {

SubsetFunction random_function(int n, SplitMix64& rng, bool zero_at_empty) {
    SubsetFunction f(n);
    for (Mask m = 0; m < (Mask{1} << n); ++m)
        f[m] = Complex{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (zero_at_empty) f[0] = 0.0;
    return f;
}

ZetaMatrix random_zeta(int n, SplitMix64& rng) {
    std::vector<Complex> upper;
    for (int i = 0; i < n * (n - 1) / 2; ++i)
        upper.emplace_back(rng.uniform(-0.8, 0.8), rng.uniform(-0.5, 0.5));
    return ZetaMatrix::from_zeta(n, upper);
}

double max_gap(const SubsetFunction& f, const SubsetFunction& g) {
    double gap = 0.0;
    for (Mask m = 0; m < f.size(); ++m) gap = std::max(gap, std::abs(f[m] - g[m]));
    return gap;
}

} // namespace

TEST_CASE("convolution unit, commutativity, associativity") {
    SplitMix64 rng(11);
    for (int n = 1; n <= 5; ++n) {
        const auto f = random_function(n, rng, false);
        const auto g = random_function(n, rng, false);
        const auto h = random_function(n, rng, false);
        CHECK(max_gap(convolve(f, algebra_unit(n)), f) < 1e-14);
        CHECK(max_gap(convolve(f, g), convolve(g, f)) < 1e-13);
        CHECK(max_gap(convolve(convolve(f, g), h), convolve(f, convolve(g, h))) < 1e-12);
    }
}

TEST_CASE("exponential of a singleton-supported function is the subset product") {
    SplitMix64 rng(12);
    for (int n = 1; n <= 4; ++n) {
        SubsetFunction f(n);
        std::vector<Complex> c(n);
        for (int i = 0; i < n; ++i) {
            c[i] = Complex{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            f[Mask{1} << i] = c[i];
        }
        const auto e = alg_exp(f);
        for (Mask m = 0; m < e.size(); ++m) {
            Complex prod = 1.0;
            for (int i = 0; i < n; ++i)
                if (m >> i & 1) prod *= c[i];
            CHECK(std::abs(e[m] - prod) < 1e-12);
        }
    }
}

TEST_CASE("inverse: unit, involution, and psi inverse") {
    SplitMix64 rng(13);
    CHECK(max_gap(alg_inverse(algebra_unit(3)), algebra_unit(3)) < 1e-15);
    for (int n = 2; n <= 4; ++n) {
        auto f = random_function(n, rng, false);
        f[0] = Complex{1.0, 0.3}; // keep well away from 0
        CHECK(max_gap(alg_inverse(alg_inverse(f)), f) < 1e-10);
        const auto z = random_zeta(n, rng);
        const auto psi = phi_psi(z).second;
        CHECK(max_gap(convolve(alg_inverse(psi), psi), algebra_unit(n)) < 1e-10);
    }
}

TEST_CASE("exp of the connected-graph function equals the pair product") {
    SplitMix64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 5); // up to 6
        const auto z = random_zeta(n, rng);
        const auto [phi, psi] = phi_psi(z);
        CHECK(phi[0] == Complex{0.0, 0.0});
        CHECK(psi[0] == Complex{1.0, 0.0});
        CHECK(max_gap(alg_exp(phi), psi) < 1e-10);
    }
}

TEST_CASE("psi equals the all-graphs sum") {
    SplitMix64 rng(15);
    for (int n = 2; n <= 4; ++n) {
        const auto z = random_zeta(n, rng);
        const auto psi = phi_psi(z).second;
        const Mask full = (Mask{1} << n) - 1;
        // oracle: sum over all edge subsets of the product of zetas
        std::vector<std::pair<int, int>> slots;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
        Complex total = 0.0;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << slots.size()); ++m) {
            Complex prod = 1.0;
            for (std::size_t s = 0; s < slots.size(); ++s)
                if (m >> s & 1) prod *= z.zeta(slots[s].first, slots[s].second);
            total += prod;
        }
        CHECK(std::abs(psi[full] - total) < 1e-10);
    }
}

TEST_CASE("phi on three elements matches the hand-expanded connected graphs") {
    SplitMix64 rng(16);
    const auto z = random_zeta(3, rng);
    const auto phi = phi_psi(z).first;
    const Complex z01 = z.zeta(0, 1), z02 = z.zeta(0, 2), z12 = z.zeta(1, 2);
    const Complex expected = z01 * z02 + z01 * z12 + z02 * z12 + z01 * z02 * z12;
    CHECK(std::abs(phi[0b111] - expected) < 1e-13);
}

TEST_CASE("shift operator: identity at empty set and the Leibniz rule") {
    SplitMix64 rng(17);
    const int n = 4;
    auto f = random_function(n, rng, true);
    CHECK(max_gap(shift(0, f), f) < 1e-15);
    const auto e = alg_exp(f);
    for (int i = 0; i < n; ++i) {
        // D_j(exp f) = (exp f) * D_j f on masks disjoint from j
        const Mask ji = Mask{1} << i;
        const auto lhs = shift(ji, e);
        const auto rhs = convolve(e, shift(ji, f));
        double gap = 0.0;
        for (Mask m = 0; m < lhs.size(); ++m)
            if (!(m & ji)) gap = std::max(gap, std::abs(lhs[m] - rhs[m]));
        CHECK(gap < 1e-10);
    }
}

TEST_CASE("iota selection: singleton, repulsive tie-break, postcondition replay") {
    SplitMix64 rng(18);
    const auto rep = random_repulsive_instance(5, 991);
    CHECK(select_iota(rep.z, rep.b, 0b00100) == 2);
    CHECK(select_iota(rep.z, rep.b, 0b11011) == 0); // all qualify, smallest index
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = random_mixed_instance(5, 3000 + trial);
        const Mask i_set = 1 + static_cast<Mask>(rng.next() % 31);
        const int i = select_iota(inst.z, inst.b, i_set);
        CHECK((i_set >> i & 1));
        double logprod = 0.0;
        for (int j = 0; j < 5; ++j)
            if ((i_set >> j & 1) && j != i)
                logprod += std::log(std::abs(1.0 + inst.z.zeta(i, j)));
        CHECK(logprod <= 2.0 * inst.b.b[i] + 1e-9);
    }
}

TEST_CASE("ks_g base cases and the single-anchor connected-graph identity") {
    const auto inst = random_mixed_instance(4, 77);
    CHECK(std::abs(ks_g(inst.z, inst.b, 0, 0, KsMode::direct) - 1.0) < 1e-12);
    CHECK(std::abs(ks_g(inst.z, inst.b, 0, 0b0110, KsMode::direct)) < 1e-12);
    CHECK(std::abs(ks_g(inst.z, inst.b, 0b0001, 0, KsMode::recursive) - 1.0) < 1e-12);
    // g({0}, rest) is the connected-graph sum over all four vertices
    Complex conn = 0.0;
    ConnectedGraphStream s(4);
    while (auto g = s.next()) {
        Complex prod = 1.0;
        for (auto [i, j] : g->edges) prod *= inst.z.zeta(i, j);
        conn += prod;
    }
    for (KsMode mode : {KsMode::direct, KsMode::recursive})
        CHECK(std::abs(ks_g(inst.z, inst.b, 0b0001, 0b1110, mode) - conn) < 1e-10);
}

TEST_CASE("ks_h base cases") {
    const auto rep = random_repulsive_instance(3, 5);
    CHECK(ks_h(rep.z, rep.b, 0, 0, KsHMode::recursive) == doctest::Approx(1.0));
    CHECK(ks_h(rep.z, rep.b, 0b001, 0b010, KsHMode::forest) ==
          doctest::Approx(std::abs(rep.z.zeta(0, 1))));
}

TEST_CASE("ks routes agree and h dominates g on random stable instances") {
    SplitMix64 rng(19);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng.next() % 5);
        const auto inst = (trial % 2 == 0) ? random_repulsive_instance(n, 500 + trial)
                                           : random_mixed_instance(n, 800 + trial);
        const Mask full = (Mask{1} << n) - 1;
        const Mask i_set = 1 + static_cast<Mask>(rng.next() % full);
        const Mask j_set = static_cast<Mask>(rng.next()) & full & ~i_set;
        const Complex g_rec = ks_g(inst.z, inst.b, i_set, j_set, KsMode::recursive);
        const Complex g_dir = ks_g(inst.z, inst.b, i_set, j_set, KsMode::direct);
        CHECK(std::abs(g_rec - g_dir) < 1e-9);
        const double h_rec = ks_h(inst.z, inst.b, i_set, j_set, KsHMode::recursive);
        const double h_for = ks_h(inst.z, inst.b, i_set, j_set, KsHMode::forest);
        CHECK(std::abs(h_rec - h_for) < 1e-9 * std::max(1.0, h_for));
        CHECK(std::abs(g_rec) <= h_for + 1e-9);
    }
}

TEST_CASE("stability certificates") {
    const auto rep = random_repulsive_instance(5, 1);
    CHECK(rep.b.certify(rep.z));
    const auto mix = random_mixed_instance(5, 2);
    CHECK(mix.b.certify(mix.z));
    StabilityWeights too_small{std::vector<double>(5, 0.0)};
    if (fit_b_uniform(mix.z) > 1e-6) CHECK_FALSE(too_small.certify(mix.z));
}
