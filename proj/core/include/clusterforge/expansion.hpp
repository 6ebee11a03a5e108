#ifndef CLUSTERFORGE_EXPANSION_HPP
#define CLUSTERFORGE_EXPANSION_HPP

#include <complex>
#include <functional>
#include <vector>

#include "clusterforge/subset_algebra.hpp"

namespace clusterforge {

// Finite state space with complex weights (the measure), a symmetric pair
// kernel including the diagonal, and per-state criterion weights a, b.
class DiscreteModel {
public:
    DiscreteModel() = default;

    // kernel entries row-major over i <= j (diagonal included); hard_core
    // marks pairs with Re u = +infinity, where zeta = -1.
    static DiscreteModel from_u(std::vector<Complex> weights,
                                std::vector<Complex> u_upper,
                                std::vector<bool> hard_core);

    int states() const { return static_cast<int>(w_.size()); }
    Complex weight(int s) const { return w_[s]; }
    Complex zeta(int s, int t) const { return zeta_[sym_index(s, t)]; }
    bool hard_core(int s, int t) const { return hard_[sym_index(s, t)]; }
    Complex u(int s, int t) const { return u_[sym_index(s, t)]; }
    Complex ubar(int s, int t) const {
        return hard_core(s, t) ? Complex{1.0, 0.0} : u(s, t);
    }

    double b(int s) const { return b_[s]; }
    double a(int s) const { return a_[s]; }
    void set_b(std::vector<double> b);
    void set_a(std::vector<double> a);
    void set_weight(int s, Complex w) { w_[s] = w; }

    bool hard_core_diagonal() const;

private:
    int sym_index(int s, int t) const;

    std::vector<Complex> w_;
    std::vector<Complex> zeta_;
    std::vector<Complex> u_;
    std::vector<bool> hard_;
    std::vector<double> b_;
    std::vector<double> a_;
};

// Truncated cluster series for log Z with the rigorous envelope bookkeeping.
struct SeriesResult {
    std::vector<Complex> partial;    // S_1..S_N, cumulative
    std::vector<double> term_abs;    // |order-n contribution|
    double tail_estimate = 0.0;      // geometric extrapolation; heuristic, not a bound
    bool converged = false;
    int orders = 0;
};

// Anchored cluster function Zhat with the Theorem-1 absolute envelope.
struct AnchoredResult {
    std::vector<Complex> partial;     // cumulative in the order index
    std::vector<double> abs_partial;  // cumulative absolute anchored sums
    double envelope = 0.0;            // (e^a - 1) e^{2b} at the first anchor
    double value_bound = 0.0;         // e^{a+2b} at the first anchor
    Complex value() const { return partial.empty() ? Complex{} : partial.back(); }
};

// phi(x_1..x_n): 1 for n = 1, else (1/n!) sum over connected graphs of the
// product of zeta couplings. n <= 8.
Complex ursell_phi(const ZetaMatrix& z);

// Unnormalized connected-graph sum, sum over C_n of prod zeta, via the
// subset recursion (no cap; cost 3^n).
Complex connected_graph_sum(int n, const std::function<Complex(int, int)>& zeta);

// Weighted spanning-tree sum, sum over T_n of prod w_ij, via the weighted
// Kirchhoff minor.
double tree_sum(int n, const std::function<double(int, int)>& w);

// Partition function by direct configuration sums with repetition; truncated
// where the factorial tail bound drops below eps.
Complex bruteforce_Z(const DiscreteModel& model, double eps);

// Unnormalized one- or two-point correlation function (anchors are state
// indices of the model).
Complex bruteforce_corr(const DiscreteModel& model, const std::vector<int>& anchors,
                        double eps);

struct ClusterOptions {
    double prune = 0.0;        // drop configuration branches below this weight
    bool check_envelope = true;
};

// Partial sums S_N of the log Z cluster series.
SeriesResult cluster_logZ(const DiscreteModel& model, int max_order,
                          const ClusterOptions& opts = {});

// Truncated Zhat(x1) or Zhat(x1,x2); throws inconsistency_error if the
// Theorem-1 envelope or the e^{a+2b} bound is violated.
AnchoredResult cluster_zhat(const DiscreteModel& model, const std::vector<int>& anchors,
                            int max_order, const ClusterOptions& opts = {});

// K_N sequence of the tree-sum induction; asserts K_N <= e^{a+2b}.
std::vector<double> k_envelope(const DiscreteModel& model, int anchor, int max_order);

enum class DecayVariant { kp, tree };

// Right side of the correlation-decay bound, chain sums up to length cap.
double decay_bound_rhs(const DiscreteModel& model, int x, int y, int chain_cap,
                       DecayVariant variant = DecayVariant::kp);

} // namespace clusterforge

#endif
