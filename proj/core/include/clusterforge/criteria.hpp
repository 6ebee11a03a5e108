#ifndef CLUSTERFORGE_CRITERIA_HPP
#define CLUSTERFORGE_CRITERIA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "clusterforge/expansion.hpp"
#include "clusterforge/subset_algebra.hpp"

namespace clusterforge {

struct FitBResult {
    double b_uniform = 0.0;     // smallest uniform value passing the subset search
    std::vector<double> b;      // per-state (uniform fill)
    bool stable = true;         // repeated-tuple spot checks up to n_max passed
    std::string detail;         // instability description when !stable
};

// Smallest uniform b with prod_{i<j in I} |1+zeta_ij| <= e^{b|I|} over all
// subsets of distinct indices.
double fit_b_uniform(const ZetaMatrix& z);

// Uniform-b search over distinct-state subsets plus repeated-tuple spot
// checks up to tuple size n_max.
FitBResult fit_b(const DiscreteModel& model, int n_max);

// Validates the b already attached to the model over all tuples with
// repetition up to size n_max.
bool validate_b(const DiscreteModel& model, int n_max);

enum class Assumption { kp, tree };

struct AssumptionReport {
    std::vector<double> lhs;    // interaction sum at each state
    std::vector<double> margin; // a(x) - lhs(x)
    double min_margin = 0.0;
    bool certified = false;     // all margins >= 0
};

// kp: lhs(x) = sum_y |w(y)| |zeta(x,y)| e^{a(y)+2b(y)};
// tree: same with |ubar| and e^{a(y)+b(y)}.
AssumptionReport check_assumption(const DiscreteModel& model, Assumption which);

enum class Prop1Mode { a, b };

struct Prop1Result {
    double lhs = 0.0; // |sum over connected graphs of prod zeta|
    double rhs = 0.0; // stability-weighted spanning-tree sum
    bool ok = false;
};

// mode a: rhs = (prod e^{2b_i}) sum over trees of prod |zeta|;
// mode b: rhs = (prod e^{b_i}) sum over trees of prod |ubar|.
// Throws model_error if the stability certificate fails.
Prop1Result verify_prop1(const ZetaMatrix& z, const StabilityWeights& b, Prop1Mode mode);

struct ProbeResult {
    int trials = 0;
    int violations = 0;
    bool hard_core_substitution_used = false; // min(|u|,|zeta|) read as min(|ubar|,|zeta|)
    std::vector<std::string> reports;         // verbatim violating instances
};

// Tests |sum over connected graphs of prod zeta| <=
// (prod e^{b_i}) sum over trees of prod min(|ubar_ij|, |zeta_ij|) on random
// stable instances. Experimental probe only; makes no correctness claim and
// must not feed any certification path.
ProbeResult conjecture_probe(int n_max, int trials, std::uint64_t seed,
                             bool experimental_ack);

struct RandomInstance {
    ZetaMatrix z;
    StabilityWeights b;
};

// Repulsive kernel (Re u >= 0, possibly hard-core pairs), b = 0.
RandomInstance random_repulsive_instance(int n, std::uint64_t seed);
// Mixed-sign u with b from the uniform subset search.
RandomInstance random_mixed_instance(int n, std::uint64_t seed);

// Random hard-core-diagonal model (2..max_states states) with b from the
// subset search, a = 0.2, and weights scaled so both interaction conditions
// hold with margin >= 0.1.
DiscreteModel random_certified_model(int max_states, std::uint64_t seed);

} // namespace clusterforge

#endif
