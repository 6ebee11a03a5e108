#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clusterforge/criteria.hpp"
#include "clusterforge/errors.hpp"
#include "clusterforge/expansion.hpp"
#include "clusterforge/graphs.hpp"
#include "clusterforge/rng.hpp"
#include "clusterforge/subset_algebra.hpp"

using namespace clusterforge;

namespace {

ZetaMatrix random_zeta(int n, SplitMix64& rng) {
    std::vector<Complex> upper;
    for (int i = 0; i < n * (n - 1) / 2; ++i)
        upper.emplace_back(rng.uniform(-0.8, 0.8), rng.uniform(-0.5, 0.5));
    return ZetaMatrix::from_zeta(n, upper);
}

// oracle: explicit enumeration of connected graphs
Complex connected_sum_oracle(const ZetaMatrix& z) {
    Complex total = 0.0;
    ConnectedGraphStream s(z.size());
    while (auto g = s.next()) {
        Complex prod = 1.0;
        for (auto [i, j] : g->edges) prod *= z.zeta(i, j);
        total += prod;
    }
    return total;
}

DiscreteModel two_state_model(double w1, double w2, double u12) {
    // hard-core diagonal, finite cross interaction
    return DiscreteModel::from_u({w1, w2}, {Complex{}, Complex{u12, 0.0}, Complex{}},
                                 {true, false, true});
}

} // namespace

TEST_CASE("ursell coefficients: base cases and permutation symmetry") {
    SplitMix64 rng(21);
    const auto z1 = ZetaMatrix::from_zeta(1, {});
    CHECK(ursell_phi(z1) == Complex{1.0, 0.0});
    const auto z2 = ZetaMatrix::from_zeta(2, {Complex{0.3, -0.2}});
    CHECK(std::abs(ursell_phi(z2) - Complex{0.15, -0.1}) < 1e-15);
    for (int n = 3; n <= 6; ++n) {
        const auto z = random_zeta(n, rng);
        const Complex base = ursell_phi(z);
        CHECK(std::abs(base - connected_sum_oracle(z) /
                                  std::tgamma(static_cast<double>(n) + 1.0)) < 1e-10);
        // permute the points and rebuild
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int rep = 0; rep < 3; ++rep) {
            for (int i = n - 1; i > 0; --i)
                std::swap(perm[i], perm[rng.next() % (i + 1)]);
            std::vector<Complex> upper;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) upper.push_back(z.zeta(perm[i], perm[j]));
            CHECK(std::abs(ursell_phi(ZetaMatrix::from_zeta(n, upper)) - base) < 1e-12);
        }
    }
}

TEST_CASE("connected_graph_sum matches enumeration") {
    SplitMix64 rng(22);
    for (int n = 1; n <= 6; ++n) {
        const auto z = random_zeta(n, rng);
        const Complex fast =
            connected_graph_sum(n, [&](int i, int j) { return z.zeta(i, j); });
        const Complex slow = n == 1 ? Complex{1.0, 0.0} : connected_sum_oracle(z);
        CHECK(std::abs(fast - slow) < 1e-10);
    }
}

TEST_CASE("tree_sum matches tree enumeration") {
    SplitMix64 rng(23);
    for (int n = 1; n <= 6; ++n) {
        std::vector<std::vector<double>> w(n, std::vector<double>(n));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) w[i][j] = w[j][i] = rng.uniform(0.0, 1.5);
        const double fast = tree_sum(n, [&](int i, int j) { return w[i][j]; });
        double slow = 0.0;
        TreeStream s(n);
        while (auto g = s.next()) {
            double prod = 1.0;
            for (auto [i, j] : g->edges) prod *= w[i][j];
            slow += prod;
        }
        CHECK(fast == doctest::Approx(slow).epsilon(1e-10));
    }
}

TEST_CASE("bruteforce_Z hand cases") {
    const DiscreteModel empty = DiscreteModel::from_u({}, {}, {});
    CHECK(std::abs(bruteforce_Z(empty, 1e-12) - 1.0) < 1e-15);

    const DiscreteModel one =
        DiscreteModel::from_u({Complex{0.4, 0.0}}, {Complex{}}, {true});
    CHECK(std::abs(bruteforce_Z(one, 1e-12) - 1.4) < 1e-14);

    const DiscreteModel two = two_state_model(0.3, 0.5, 0.7);
    const Complex z12 = std::exp(Complex{-0.7, 0.0}) - 1.0;
    CHECK(std::abs(bruteforce_Z(two, 1e-12) -
                   (1.0 + 0.3 + 0.5 + 0.15 * (1.0 + z12))) < 1e-13);
}

TEST_CASE("zero interaction gives Z = exp(sum of weights)") {
    const int S = 3;
    std::vector<Complex> w{0.2, 0.15, 0.1};
    std::vector<Complex> u(S * (S + 1) / 2, Complex{});
    std::vector<bool> hard(S * (S + 1) / 2, false);
    const DiscreteModel m = DiscreteModel::from_u(w, u, hard);
    CHECK(std::abs(bruteforce_Z(m, 1e-13) - std::exp(Complex{0.45, 0.0})) < 1e-10);
    const auto series = cluster_logZ(m, 4);
    // only the first-order term survives
    CHECK(std::abs(series.partial.back() - Complex{0.45, 0.0}) < 1e-14);
}

TEST_CASE("one-point function equals Z of the tilted model") {
    const DiscreteModel m = random_certified_model(4, 99);
    const int S = m.states();
    for (int x = 0; x < S; ++x) {
        std::vector<Complex> w;
        std::vector<Complex> u;
        std::vector<bool> hard;
        for (int s = 0; s < S; ++s) w.push_back((1.0 + m.zeta(x, s)) * m.weight(s));
        for (int i = 0; i < S; ++i)
            for (int j = i; j <= S - 1; ++j) {
                hard.push_back(m.hard_core(i, j));
                u.push_back(m.hard_core(i, j) ? Complex{} : m.u(i, j));
            }
        const DiscreteModel tilted = DiscreteModel::from_u(w, u, hard);
        CHECK(std::abs(bruteforce_corr(m, {x}, 1e-12) - bruteforce_Z(tilted, 1e-12)) <
              1e-10);
    }
}

TEST_CASE("two-point function on a single pair") {
    const DiscreteModel two = two_state_model(0.0, 0.0, 0.9);
    const Complex expected = std::exp(Complex{-0.9, 0.0});
    CHECK(std::abs(bruteforce_corr(two, {0, 1}, 1e-12) - expected) < 1e-13);
}

TEST_CASE("single hard-core state: series matches log(1+w) order by order") {
    const double w = 0.35;
    const DiscreteModel m = DiscreteModel::from_u({Complex{w, 0.0}}, {Complex{}}, {true});
    const auto series = cluster_logZ(m, 8);
    double expect = 0.0;
    for (int n = 1; n <= 8; ++n) {
        expect += (n % 2 == 1 ? 1.0 : -1.0) * std::pow(w, n) / n;
        CHECK(std::abs(series.partial[n - 1] - Complex{expect, 0.0}) < 1e-12);
    }
    CHECK(std::abs(series.partial.back() - std::log(1.0 + w)) < std::pow(w, 9));
}

TEST_CASE("cluster series reaches the brute-force log Z on certified models") {
    for (int trial = 0; trial < 10; ++trial) {
        const DiscreteModel m = random_certified_model(5, 4000 + trial);
        const Complex z = bruteforce_Z(m, 1e-14);
        const auto series = cluster_logZ(m, 12);
        CHECK(std::abs(series.partial.back() - std::log(z)) < 1e-8);
    }
}

TEST_CASE("anchored series: leading term and the two Theorem-2 identities") {
    for (int trial = 0; trial < 8; ++trial) {
        const DiscreteModel m = random_certified_model(4, 6000 + trial);
        const Complex z = bruteforce_Z(m, 1e-14);
        const auto zh0 = cluster_zhat(m, {0}, 12);
        CHECK(std::abs(zh0.partial.front() - 1.0) < 1e-15);
        CHECK(std::abs(bruteforce_corr(m, {0}, 1e-14) / z - zh0.value()) < 1e-6);
        if (m.states() >= 2) {
            const auto zh1 = cluster_zhat(m, {1}, 12);
            const auto zh01 = cluster_zhat(m, {0, 1}, 12);
            const Complex lhs = bruteforce_corr(m, {0, 1}, 1e-14) / z;
            CHECK(std::abs(lhs - zh0.value() * zh1.value() - zh01.value()) < 1e-6);
        }
    }
}

TEST_CASE("anchored absolute sums stay inside the envelope") {
    const DiscreteModel m = random_certified_model(4, 321);
    const auto zh = cluster_zhat(m, {0}, 10);
    CHECK(zh.abs_partial.back() <= zh.envelope + 1e-12);
    for (std::size_t i = 1; i < zh.abs_partial.size(); ++i)
        CHECK(zh.abs_partial[i] >= zh.abs_partial[i - 1]);
}

TEST_CASE("tree-sum induction envelope") {
    const DiscreteModel m = random_certified_model(4, 17);
    const auto ks = k_envelope(m, 0, 6);
    CHECK(ks.front() == doctest::Approx(std::exp(2.0 * m.b(0))));
    for (std::size_t i = 1; i < ks.size(); ++i) CHECK(ks[i] >= ks[i - 1]);
    CHECK(ks.back() <= std::exp(m.a(0) + 2.0 * m.b(0)) + 1e-12);
}

TEST_CASE("correlation-decay bound: hand value and domination") {
    const DiscreteModel two = two_state_model(0.0, 0.0, 0.8);
    const double z12 = std::abs(std::exp(-0.8) - 1.0);
    CHECK(decay_bound_rhs(two, 0, 1, 0, DecayVariant::kp) ==
          doctest::Approx(z12)); // a = b = 0
    for (int trial = 0; trial < 8; ++trial) {
        const DiscreteModel m = random_certified_model(4, 7000 + trial);
        for (int y = 1; y < m.states(); ++y) {
            const Complex zhat = cluster_zhat(m, {0, y}, 12).value();
            CHECK(std::abs(zhat) <= decay_bound_rhs(m, 0, y, 30, DecayVariant::kp) + 1e-12);
            CHECK(std::abs(zhat) <=
                  decay_bound_rhs(m, 0, y, 30, DecayVariant::tree) + 1e-12);
        }
    }
}

TEST_CASE("zero coupling collapses the decay bound") {
    std::vector<Complex> u(3, Complex{});
    const DiscreteModel m = DiscreteModel::from_u({0.3, 0.4}, u, {false, false, false});
    CHECK(decay_bound_rhs(m, 0, 1, 10, DecayVariant::kp) == 0.0);
}

TEST_CASE("capacity guards") {
    CHECK_THROWS_AS(ursell_phi(ZetaMatrix::from_zeta(9, std::vector<Complex>(36))),
                    capacity_error);
    const DiscreteModel m = random_certified_model(3, 5);
    CHECK_THROWS_AS(k_envelope(m, 0, 9), capacity_error);
}
