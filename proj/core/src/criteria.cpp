#include "clusterforge/criteria.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "clusterforge/errors.hpp"
#include "clusterforge/rng.hpp"

namespace clusterforge {

double fit_b_uniform(const ZetaMatrix& z) {
    const int n = z.size();
    if (n > 12) throw capacity_error("uniform-b subset search supports n <= 12");
    double best = 0.0;
    const Mask full = (Mask{1} << n) - 1;
    for (Mask m = 1; m <= full; ++m) {
        const int size = std::popcount(m);
        if (size < 2) continue;
        double logprod = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!(m >> i & 1)) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!(m >> j & 1)) continue;
                const double mod = std::abs(1.0 + z.zeta(i, j));
                if (mod == 0.0) {
                    logprod = -std::numeric_limits<double>::infinity();
                    break;
                }
                logprod += std::log(mod);
            }
            if (logprod == -std::numeric_limits<double>::infinity()) break;
        }
        if (logprod > 0.0) best = std::max(best, logprod / size);
    }
    return best;
}

namespace {

// log of prod over position pairs of |1+zeta| for a multiset given by
// multiplicities; -inf when a factor vanishes.
double multiset_log_pair_product(const DiscreteModel& model, const std::vector<int>& mult) {
    const int S = model.states();
    double logprod = 0.0;
    for (int s = 0; s < S; ++s) {
        if (mult[s] == 0) continue;
        const double self = std::abs(1.0 + model.zeta(s, s));
        const long long pairs = static_cast<long long>(mult[s]) * (mult[s] - 1) / 2;
        if (pairs > 0) {
            if (self == 0.0) return -std::numeric_limits<double>::infinity();
            logprod += pairs * std::log(self);
        }
        for (int t = s + 1; t < S; ++t) {
            if (mult[t] == 0) continue;
            const double cross = std::abs(1.0 + model.zeta(s, t));
            if (cross == 0.0) return -std::numeric_limits<double>::infinity();
            logprod += static_cast<double>(mult[s]) * mult[t] * std::log(cross);
        }
    }
    return logprod;
}

// Visits every multiset of states with 1 <= total size <= n_max; returns the
// first failure description under the given per-copy b values, or empty.
std::string multiset_b_check(const DiscreteModel& model, const std::vector<double>& b,
                             int n_max) {
    const int S = model.states();
    std::vector<int> mult(S, 0);
    std::string failure;
    std::function<void(int, int)> rec = [&](int s, int remaining) {
        if (!failure.empty()) return;
        if (s == S) {
            int total = 0;
            double bsum = 0.0;
            for (int t = 0; t < S; ++t) {
                total += mult[t];
                bsum += b[t] * mult[t];
            }
            if (total < 2) return;
            const double lp = multiset_log_pair_product(model, mult);
            if (lp > bsum + 1e-9) {
                std::ostringstream os;
                os << "tuple (";
                for (int t = 0; t < S; ++t)
                    for (int k = 0; k < mult[t]; ++k) os << ' ' << t;
                os << " ): log pair product " << lp << " exceeds b sum " << bsum;
                failure = os.str();
            }
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            mult[s] = k;
            rec(s + 1, remaining - k);
        }
        mult[s] = 0;
    };
    rec(0, n_max);
    return failure;
}

ZetaMatrix offdiag_matrix(const DiscreteModel& model) {
    const int n = model.states();
    std::vector<Complex> upper;
    std::vector<bool> hard;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            upper.push_back(model.hard_core(i, j) ? Complex{} : model.u(i, j));
            hard.push_back(model.hard_core(i, j));
        }
    return ZetaMatrix::from_u(n, upper, hard);
}

} // namespace

FitBResult fit_b(const DiscreteModel& model, int n_max) {
    if (model.states() > 12) throw capacity_error("fit_b supports <= 12 states");
    FitBResult out;
    out.b_uniform = fit_b_uniform(offdiag_matrix(model));
    out.b.assign(model.states(), out.b_uniform);
    out.detail = multiset_b_check(model, out.b, n_max);
    out.stable = out.detail.empty();
    return out;
}

bool validate_b(const DiscreteModel& model, int n_max) {
    if (model.states() > 12) throw capacity_error("validate_b supports <= 12 states");
    std::vector<double> b(model.states());
    for (int s = 0; s < model.states(); ++s) b[s] = model.b(s);
    return multiset_b_check(model, b, n_max).empty();
}

AssumptionReport check_assumption(const DiscreteModel& model, Assumption which) {
    const int S = model.states();
    const bool kp = which == Assumption::kp;
    AssumptionReport rep;
    rep.lhs.resize(S);
    rep.margin.resize(S);
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (int x = 0; x < S; ++x) {
        double lhs = 0.0;
        for (int y = 0; y < S; ++y) {
            const double coupling = kp ? std::abs(model.zeta(x, y)) : std::abs(model.ubar(x, y));
            lhs += std::abs(model.weight(y)) * coupling *
                   std::exp(model.a(y) + (kp ? 2.0 : 1.0) * model.b(y));
        }
        rep.lhs[x] = lhs;
        rep.margin[x] = model.a(x) - lhs;
        rep.min_margin = std::min(rep.min_margin, rep.margin[x]);
    }
    rep.certified = rep.min_margin >= 0.0;
    return rep;
}

Prop1Result verify_prop1(const ZetaMatrix& z, const StabilityWeights& b, Prop1Mode mode) {
    const int n = z.size();
    if (n > 7) throw capacity_error("verify_prop1 supports n <= 7");
    if (!b.certify(z)) throw model_error("stability certificate failed");
    Prop1Result out;
    out.lhs = std::abs(connected_graph_sum(n, [&](int i, int j) { return z.zeta(i, j); }));
    double prefactor = 0.0;
    for (double bi : b.b) prefactor += (mode == Prop1Mode::a ? 2.0 : 1.0) * bi;
    const auto coupling = [&](int i, int j) {
        return mode == Prop1Mode::a ? z.abs_zeta(i, j) : z.abs_ubar(i, j);
    };
    out.rhs = std::exp(prefactor) * tree_sum(n, coupling);
    out.ok = out.lhs <= out.rhs * (1.0 + 1e-12) + 1e-300;
    return out;
}

RandomInstance random_repulsive_instance(int n, std::uint64_t seed) {
    SplitMix64 rng(derive_seed(seed, 0x7265706cULL, 0));
    std::vector<Complex> u;
    std::vector<bool> hard;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool hc = rng.next_u01() < 0.1;
            hard.push_back(hc);
            u.push_back(hc ? Complex{}
                           : Complex{rng.uniform(0.0, 2.0), rng.uniform(-0.5, 0.5)});
        }
    RandomInstance inst{ZetaMatrix::from_u(n, u, hard), StabilityWeights{}};
    inst.b.b.assign(n, 0.0);
    return inst;
}

RandomInstance random_mixed_instance(int n, std::uint64_t seed) {
    SplitMix64 rng(derive_seed(seed, 0x6d697865ULL, 0));
    std::vector<Complex> u;
    std::vector<bool> hard;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool hc = rng.next_u01() < 0.08;
            hard.push_back(hc);
            u.push_back(hc ? Complex{}
                           : Complex{rng.uniform(-0.4, 1.2), rng.uniform(-0.3, 0.3)});
        }
    RandomInstance inst{ZetaMatrix::from_u(n, u, hard), StabilityWeights{}};
    inst.b.b.assign(n, fit_b_uniform(inst.z));
    return inst;
}

DiscreteModel random_certified_model(int max_states, std::uint64_t seed) {
    SplitMix64 rng(derive_seed(seed, 0x6d6f64656cULL, 0));
    const int S = 2 + static_cast<int>(rng.next() % std::max(1, max_states - 1));
    std::vector<Complex> w(S);
    for (auto& v : w) v = rng.uniform(0.2, 1.0);
    std::vector<Complex> u;
    std::vector<bool> hard;
    for (int i = 0; i < S; ++i)
        for (int j = i; j < S; ++j) {
            const bool hc = i == j || rng.next_u01() < 0.1;
            hard.push_back(hc);
            u.push_back(hc ? Complex{} : Complex{rng.uniform(-0.4, 1.0), 0.0});
        }
    DiscreteModel m = DiscreteModel::from_u(std::move(w), std::move(u), std::move(hard));
    const FitBResult fb = fit_b(m, 6);
    m.set_b(fb.b);
    m.set_a(std::vector<double>(S, 0.2));
    // scale weights so the larger of the two interaction sums is 0.05,
    // leaving margin 0.15 under both conditions
    double worst = 0.0;
    for (Assumption which : {Assumption::kp, Assumption::tree}) {
        const auto rep = check_assumption(m, which);
        for (double lhs : rep.lhs) worst = std::max(worst, lhs);
    }
    if (worst > 0.0)
        for (int s = 0; s < S; ++s) m.set_weight(s, m.weight(s) * (0.05 / worst));
    return m;
}

ProbeResult conjecture_probe(int n_max, int trials, std::uint64_t seed,
                             bool experimental_ack) {
    if (!experimental_ack)
        throw std::invalid_argument(
            "conjecture_probe is experimental; pass the acknowledgement flag");
    if (n_max < 2 || n_max > 6)
        throw capacity_error("conjecture_probe supports 2 <= n <= 6");
    ProbeResult out;
    out.trials = trials;
    for (int t = 0; t < trials; ++t) {
        const int n = 2 + static_cast<int>(derive_seed(seed, 0x70726f62ULL, t) % (n_max - 1));
        RandomInstance inst = (t % 2 == 0)
                                  ? random_repulsive_instance(n, derive_seed(seed, 1, t))
                                  : random_mixed_instance(n, derive_seed(seed, 2, t));
        bool any_hard = false;
        for (int i = 0; i < n && !any_hard; ++i)
            for (int j = i + 1; j < n; ++j)
                if (inst.z.hard_core(i, j)) {
                    any_hard = true;
                    break;
                }
        if (any_hard) out.hard_core_substitution_used = true;
        const double lhs = std::abs(
            connected_graph_sum(n, [&](int i, int j) { return inst.z.zeta(i, j); }));
        double bsum = 0.0;
        for (double bi : inst.b.b) bsum += bi;
        const double rhs = std::exp(bsum) *
                           tree_sum(n, [&](int i, int j) {
                               return std::min(inst.z.abs_ubar(i, j), inst.z.abs_zeta(i, j));
                           });
        if (lhs > rhs * (1.0 + 1e-12) + 1e-300) {
            ++out.violations;
            std::ostringstream os;
            os << "trial " << t << " n=" << n << " lhs=" << lhs << " rhs=" << rhs;
            out.reports.push_back(os.str());
        }
    }
    return out;
}

} // namespace clusterforge
