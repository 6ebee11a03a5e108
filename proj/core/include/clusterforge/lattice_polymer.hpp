#ifndef CLUSTERFORGE_LATTICE_POLYMER_HPP
#define CLUSTERFORGE_LATTICE_POLYMER_HPP

#include <array>
#include <vector>

#include "clusterforge/expansion.hpp"

namespace clusterforge {

using Site = std::array<int, 3>; // unused coordinates stay 0

// Finite connected subset of the lattice; canonical form is the sorted
// site list.
struct Polymer {
    std::vector<Site> sites;

    int size() const { return static_cast<int>(sites.size()); }
    bool operator==(const Polymer&) const = default;
    bool operator<(const Polymer& o) const { return sites < o.sites; }
};

bool polymer_connected(const Polymer& x, int d);

// All connected origin-containing subsets, grouped by size 1..max_size.
std::vector<std::vector<Polymer>> enumerate_polymers(int d, int max_size);

struct PolymerInteraction {
    bool overlap = false;
    int contacts = 0; // nearest-neighbor bonds between the two site sets
};

PolymerInteraction polymer_interaction(const Polymer& x, const Polymer& y);

struct PolymerModel {
    int d = 2;
    double gamma = 1.0; // activity z(x) = e^{-gamma |x|}
    double eta = 0.0;   // contact attraction strength
};

struct PolymerCriterion {
    double exact_part = 0.0; // enumerated sum up to n_cut
    double tail = 0.0;       // closed-form walk-bound remainder
    double lhs = 0.0;
    bool tail_convergent = false;
    bool ok = false; // lhs <= a and tail convergent
};

// Per-site condition: sum over origin-containing polymers y of
// (1 + 2 d eta |y|) e^{-gamma |y|} e^{(a + eta d)|y|} <= a, with the tail
// bounded by the walk count (2d)^{2n-3}. Refuses (ok = false,
// tail_convergent = false) when the tail ratio reaches 1.
PolymerCriterion polymer_criterion(const PolymerModel& model, double a, int n_cut);

// gamma* = 2 (2d)^{-3/2} + 3 d eta + 2 log(2d), the sufficient activity decay
// at a = (2d)^{-3/2}.
double gamma_threshold(int d, double eta);

struct PolymerBoxResult {
    double z_exact = 0.0;        // direct sum over non-overlapping families
    double logZ_series = 0.0;    // cluster series on the induced model
    double gap = 0.0;            // |log z_exact - logZ_series|
    int states = 0;              // polymers fitting in the box
    DiscreteModel model;
};

// Exact finite-box partition function (polymers strictly inside the box,
// free boundary) against the cluster series on the induced discrete model.
PolymerBoxResult polymer_box_Z(const PolymerModel& model, std::array<int, 3> extent,
                               int max_polymer_size, int series_order, double prune);

} // namespace clusterforge

#endif
