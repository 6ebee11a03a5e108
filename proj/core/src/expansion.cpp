#include "clusterforge/expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "clusterforge/errors.hpp"

namespace clusterforge {

namespace {

// Compensated (Kahan) accumulator; term counts in the configuration sums
// reach 10^6.
struct KahanSum {
    Complex sum{};
    Complex comp{};

    void add(Complex x) {
        const Complex y = x - comp;
        const Complex t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

Complex int_pow(Complex base, long long e) {
    Complex r = 1.0;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

} // namespace

int DiscreteModel::sym_index(int s, int t) const {
    if (s > t) std::swap(s, t);
    const int n = states();
    return s * n - s * (s - 1) / 2 + (t - s);
}

DiscreteModel DiscreteModel::from_u(std::vector<Complex> weights,
                                    std::vector<Complex> u_upper,
                                    std::vector<bool> hard_core) {
    DiscreteModel m;
    const int n = static_cast<int>(weights.size());
    const std::size_t pairs = static_cast<std::size_t>(n) * (n + 1) / 2;
    if (u_upper.size() != pairs || hard_core.size() != pairs)
        throw std::invalid_argument("kernel size mismatch");
    m.w_ = std::move(weights);
    m.u_ = std::move(u_upper);
    m.hard_ = std::move(hard_core);
    m.zeta_.resize(pairs);
    for (std::size_t p = 0; p < pairs; ++p)
        m.zeta_[p] = m.hard_[p] ? Complex{-1.0, 0.0} : std::exp(-m.u_[p]) - 1.0;
    m.b_.assign(n, 0.0);
    m.a_.assign(n, 0.0);
    return m;
}

void DiscreteModel::set_b(std::vector<double> b) {
    if (static_cast<int>(b.size()) != states())
        throw std::invalid_argument("b size mismatch");
    b_ = std::move(b);
}

void DiscreteModel::set_a(std::vector<double> a) {
    if (static_cast<int>(a.size()) != states())
        throw std::invalid_argument("a size mismatch");
    a_ = std::move(a);
}

bool DiscreteModel::hard_core_diagonal() const {
    for (int s = 0; s < states(); ++s)
        if (!hard_core(s, s)) return false;
    return true;
}

Complex connected_graph_sum(int n, const std::function<Complex(int, int)>& zeta) {
    if (n < 1) throw std::invalid_argument("connected_graph_sum needs n >= 1");
    if (n > 16) throw capacity_error("connected_graph_sum supports n <= 16");
    const Mask full = (Mask{1} << n) - 1;
    std::vector<Complex> psi(full + 1), phi(full + 1);
    psi[0] = 1.0;
    for (Mask m = 1; m <= full; ++m) {
        const int low = std::countr_zero(m);
        Complex prod = psi[m & (m - 1)];
        for (int j = low + 1; j < n; ++j)
            if (m >> j & 1) prod *= 1.0 + zeta(low, j);
        psi[m] = prod;
    }
    // Phi(I) = Psi(I) - sum over proper subsets J of I containing the lowest
    // element, of Phi(J) Psi(I \ J).
    for (Mask m = 1; m <= full; ++m) {
        const Mask lowbit = m & (Mask{0} - m);
        Complex acc = psi[m];
        const Mask rest = m ^ lowbit;
        for (Mask sub = rest; sub; sub = (sub - 1) & rest) {
            const Mask j = m ^ sub; // contains lowbit, proper subset of m
            acc -= phi[j] * psi[sub];
        }
        phi[m] = acc;
    }
    return phi[full];
}

Complex ursell_phi(const ZetaMatrix& z) {
    const int n = z.size();
    if (n < 1) throw std::invalid_argument("ursell_phi needs n >= 1");
    if (n > 8) throw capacity_error("ursell_phi supports n <= 8");
    if (n == 1) return 1.0;
    const Complex c = connected_graph_sum(n, [&](int i, int j) { return z.zeta(i, j); });
    double fact = 1.0;
    for (int k = 2; k <= n; ++k) fact *= k;
    return c / fact;
}

double tree_sum(int n, const std::function<double(int, int)>& w) {
    if (n < 1) throw std::invalid_argument("tree_sum needs n >= 1");
    if (n == 1) return 1.0;
    // Weighted Kirchhoff: determinant of the Laplacian minor.
    const int m = n - 1;
    std::vector<std::vector<double>> lap(m, std::vector<double>(m, 0.0));
    for (int i = 1; i < n; ++i) {
        double diag = w(0, i);
        for (int j = 1; j < n; ++j) {
            if (j == i) continue;
            const double wij = w(i, j);
            diag += wij;
            lap[i - 1][j - 1] = -wij;
        }
        lap[i - 1][i - 1] = diag;
    }
    double det = 1.0;
    for (int col = 0; col < m; ++col) {
        int pivot = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(lap[r][col]) > std::abs(lap[pivot][col])) pivot = r;
        if (lap[pivot][col] == 0.0) return 0.0;
        if (pivot != col) {
            std::swap(lap[pivot], lap[col]);
            det = -det;
        }
        det *= lap[col][col];
        for (int r = col + 1; r < m; ++r) {
            const double f = lap[r][col] / lap[col][col];
            for (int c = col; c < m; ++c) lap[r][c] -= f * lap[col][c];
        }
    }
    return det;
}

namespace {

// Pair factor of a multiset configuration, prod over unordered pairs of
// (1 + zeta), including within-state repetitions.
Complex multiset_pair_factor(const DiscreteModel& model, const std::vector<int>& mult) {
    const int S = model.states();
    Complex prod = 1.0;
    for (int s = 0; s < S; ++s) {
        if (mult[s] == 0) continue;
        const long long ms = mult[s];
        if (ms >= 2) prod *= int_pow(1.0 + model.zeta(s, s), ms * (ms - 1) / 2);
        for (int t = s + 1; t < S; ++t)
            if (mult[t] > 0)
                prod *= int_pow(1.0 + model.zeta(s, t),
                                ms * static_cast<long long>(mult[t]));
    }
    return prod;
}

double weight_norm(const DiscreteModel& model) {
    double m = 0.0;
    for (int s = 0; s < model.states(); ++s)
        m += std::abs(model.weight(s)) * std::exp(model.b(s));
    if (!std::isfinite(m)) throw model_error("weight sum diverges");
    return m;
}

// Largest configuration size whose factorial tail bound exceeds eps.
int truncation_order(const DiscreteModel& model, double eps, double extra_log_factor) {
    const double m = weight_norm(model);
    if (model.hard_core_diagonal()) return model.states();
    double term = 1.0;
    double n = 0;
    // tail(N) <= e^{extra} * M^{N+1}/(N+1)! * e^M
    const double scale = std::exp(extra_log_factor + m);
    while (n < 500) {
        term *= m / (n + 1);
        if (scale * term < eps) break;
        ++n;
    }
    return static_cast<int>(n);
}

void for_each_multiset(const DiscreteModel& model, int max_size,
                       const std::function<void(const std::vector<int>&)>& visit) {
    const int S = model.states();
    std::vector<int> mult(S, 0);
    std::function<void(int, int)> rec = [&](int s, int remaining) {
        if (s == S) {
            visit(mult);
            return;
        }
        const int cap = model.hard_core(s, s) ? std::min(1, remaining) : remaining;
        for (int k = 0; k <= cap; ++k) {
            mult[s] = k;
            rec(s + 1, remaining - k);
        }
        mult[s] = 0;
    };
    rec(0, max_size);
}

} // namespace

Complex bruteforce_Z(const DiscreteModel& model, double eps) {
    const int cutoff = truncation_order(model, eps, 0.0);
    KahanSum z;
    for_each_multiset(model, cutoff, [&](const std::vector<int>& mult) {
        Complex w = 1.0;
        for (int s = 0; s < model.states(); ++s)
            for (int k = 1; k <= mult[s]; ++k) w *= model.weight(s) / double(k);
        z.add(w * multiset_pair_factor(model, mult));
    });
    return z.sum;
}

Complex bruteforce_corr(const DiscreteModel& model, const std::vector<int>& anchors,
                        double eps) {
    if (anchors.empty() || anchors.size() > 2)
        throw std::invalid_argument("one or two anchor states expected");
    double anchor_b = 0.0;
    for (int x : anchors) anchor_b += 2.0 * model.b(x);
    const int cutoff = truncation_order(model, eps, anchor_b);
    Complex anchor_pair = 1.0;
    if (anchors.size() == 2) anchor_pair = 1.0 + model.zeta(anchors[0], anchors[1]);
    KahanSum z;
    for_each_multiset(model, cutoff, [&](const std::vector<int>& mult) {
        Complex w = 1.0;
        for (int s = 0; s < model.states(); ++s) {
            if (mult[s] == 0) continue;
            for (int k = 1; k <= mult[s]; ++k) w *= model.weight(s) / double(k);
            for (int x : anchors) w *= int_pow(1.0 + model.zeta(x, s), mult[s]);
        }
        z.add(w * multiset_pair_factor(model, mult));
    });
    return anchor_pair * z.sum;
}

namespace {

// Shared recursive walk over configurations (combinations of states with
// repetition), optionally anchored. `sink(order, weight, connected)` receives
// the connected-graph sum of the expanded tuple and its measure weight.
struct ClusterWalk {
    const DiscreteModel& model;
    std::vector<int> anchors;
    int max_order;
    double prune;
    std::function<void(int, Complex, Complex)> sink;

    std::vector<int> tuple;        // expanded state list, anchors first
    std::vector<double> suffix_abs; // sum of |w_t| for t >= s

    void run() {
        const int S = model.states();
        suffix_abs.assign(S + 1, 0.0);
        for (int s = S - 1; s >= 0; --s)
            suffix_abs[s] = suffix_abs[s + 1] + std::abs(model.weight(s));
        tuple = anchors;
        if (!anchors.empty()) emit(1.0);
        descend(0, 1.0, 1);
    }

private:
    void emit(Complex weight) {
        const int n = static_cast<int>(tuple.size());
        const Complex c = connected_graph_sum(
            n, [&](int i, int j) { return model.zeta(tuple[i], tuple[j]); });
        sink(n, weight, c);
    }

    void descend(int s, Complex weight, int count_of_s) {
        const int S = model.states();
        if (static_cast<int>(tuple.size()) + 1 > max_order) return;
        for (int t = s; t < S; ++t) {
            const int reps = (t == s) ? count_of_s : 1;
            const Complex w = weight * model.weight(t) / double(reps);
            if (prune > 0.0 && std::abs(w) * std::exp(suffix_abs[t]) < prune) continue;
            tuple.push_back(t);
            emit(w);
            descend(t, w, reps + 1);
            tuple.pop_back();
        }
    }
};

} // namespace

SeriesResult cluster_logZ(const DiscreteModel& model, int max_order,
                          const ClusterOptions& opts) {
    if (max_order < 1) throw std::invalid_argument("max_order >= 1 required");
    std::vector<KahanSum> order_sum(max_order + 1);
    ClusterWalk walk{model, {}, max_order, opts.prune,
                     [&](int n, Complex w, Complex c) { order_sum[n].add(w * c); }};
    walk.run();
    SeriesResult out;
    Complex cum{};
    for (int n = 1; n <= max_order; ++n) {
        cum += order_sum[n].sum;
        out.partial.push_back(cum);
        out.term_abs.push_back(std::abs(order_sum[n].sum));
    }
    out.orders = max_order;
    if (max_order >= 2 && out.term_abs[max_order - 2] > 0.0) {
        const double r = out.term_abs[max_order - 1] / out.term_abs[max_order - 2];
        if (r < 1.0)
            out.tail_estimate = out.term_abs[max_order - 1] * r / (1.0 - r);
        else
            out.tail_estimate = std::numeric_limits<double>::infinity();
        out.converged = out.tail_estimate < 1e-9;
    }
    return out;
}

AnchoredResult cluster_zhat(const DiscreteModel& model, const std::vector<int>& anchors,
                            int max_order, const ClusterOptions& opts) {
    if (anchors.empty() || anchors.size() > 2)
        throw std::invalid_argument("one or two anchor states expected");
    const int k = static_cast<int>(anchors.size());
    if (max_order < k) throw std::invalid_argument("max_order too small for anchors");
    std::vector<KahanSum> order_sum(max_order + 1);
    std::vector<double> order_abs(max_order + 1, 0.0);
    ClusterWalk walk{model, anchors, max_order, opts.prune,
                     [&](int n, Complex w, Complex c) {
                         order_sum[n].add(w * c);
                         order_abs[n] += std::abs(w) * std::abs(c);
                     }};
    walk.run();
    AnchoredResult out;
    const int x1 = anchors[0];
    out.envelope = (std::exp(model.a(x1)) - 1.0) * std::exp(2.0 * model.b(x1));
    out.value_bound = std::exp(model.a(x1) + 2.0 * model.b(x1));
    Complex cum{};
    double cum_abs = 0.0;
    for (int n = k; n <= max_order; ++n) {
        cum += order_sum[n].sum;
        out.partial.push_back(cum);
        if (n >= 2) cum_abs += order_abs[n];
        out.abs_partial.push_back(cum_abs);
        if (opts.check_envelope && k == 1) {
            if (cum_abs > out.envelope * (1.0 + 1e-9) + 1e-12)
                throw inconsistency_error("anchored absolute sums exceed the envelope");
            if (std::abs(cum) > out.value_bound * (1.0 + 1e-9) + 1e-12)
                throw inconsistency_error("|Zhat| exceeds e^{a+2b}");
        }
    }
    return out;
}

std::vector<double> k_envelope(const DiscreteModel& model, int anchor, int max_order) {
    if (max_order < 1 || max_order > 8)
        throw capacity_error("k_envelope supports 1 <= N <= 8 (exact tree sums)");
    std::vector<double> order_term(max_order + 1, 0.0);
    // |mu|-weighted walk with absolute couplings and e^{2b} factors.
    std::vector<int> tuple{anchor};
    const int S = model.states();
    std::function<void(int, double)> rec = [&](int s, double weight) {
        const int n = static_cast<int>(tuple.size());
        double e2b = 1.0;
        for (int v : tuple) e2b *= std::exp(2.0 * model.b(v));
        order_term[n] += weight * e2b *
                         tree_sum(n, [&](int i, int j) {
                             return std::abs(model.zeta(tuple[i], tuple[j]));
                         });
        if (n == max_order) return;
        for (int t = s; t < S; ++t) {
            int same = 0; // multiplicity of t already placed (excluding the anchor)
            for (std::size_t q = 1; q < tuple.size(); ++q)
                if (tuple[q] == t) ++same;
            tuple.push_back(t);
            rec(t, weight * std::abs(model.weight(t)) / double(same + 1));
            tuple.pop_back();
        }
    };
    rec(0, 1.0);
    std::vector<double> out;
    double cum = 0.0;
    const double bound = std::exp(model.a(anchor) + 2.0 * model.b(anchor));
    for (int n = 1; n <= max_order; ++n) {
        cum += order_term[n];
        out.push_back(cum);
        if (cum > bound * (1.0 + 1e-9) + 1e-12)
            throw inconsistency_error("K_N exceeds e^{a+2b}");
    }
    return out;
}

double decay_bound_rhs(const DiscreteModel& model, int x, int y, int chain_cap,
                       DecayVariant variant) {
    const int S = model.states();
    const bool kp = variant == DecayVariant::kp;
    auto factor = [&](int s) {
        return std::exp(model.a(s) + (kp ? 2.0 : 1.0) * model.b(s));
    };
    auto coupling = [&](int s, int t) {
        return kp ? std::abs(model.zeta(s, t)) : std::abs(model.ubar(s, t));
    };
    double total = coupling(x, y) * factor(x);
    // v_s: weight of open chains from x ending at state s (s not yet measured).
    std::vector<double> v(S);
    for (int s = 0; s < S; ++s) v[s] = factor(x) * coupling(x, s);
    for (int m = 1; m <= chain_cap; ++m) {
        double chain = 0.0;
        std::vector<double> next(S, 0.0);
        for (int s = 0; s < S; ++s) {
            const double node = v[s] * std::abs(model.weight(s)) * factor(s);
            chain += node * coupling(s, y);
            for (int t = 0; t < S; ++t) next[t] += node * coupling(s, t);
        }
        total += chain;
        v.swap(next);
    }
    return std::exp(model.a(y) + (kp ? 2.0 : 1.0) * model.b(y)) * total;
}

} // namespace clusterforge
