#include "clusterforge/lattice_polymer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>

#include "clusterforge/errors.hpp"

namespace clusterforge {

namespace {

std::vector<Site> neighbors(const Site& s, int d) {
    std::vector<Site> out;
    for (int c = 0; c < d; ++c)
        for (int dir : {-1, 1}) {
            Site t = s;
            t[c] += dir;
            out.push_back(t);
        }
    return out;
}

bool contains(const Polymer& p, const Site& s) {
    return std::binary_search(p.sites.begin(), p.sites.end(), s);
}

} // namespace

bool polymer_connected(const Polymer& x, int d) {
    if (x.sites.empty()) return false;
    std::vector<char> seen(x.sites.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const Site s = x.sites[stack.back()];
        stack.pop_back();
        for (const Site& t : neighbors(s, d)) {
            const auto it = std::lower_bound(x.sites.begin(), x.sites.end(), t);
            if (it == x.sites.end() || *it != t) continue;
            const auto idx = static_cast<std::size_t>(it - x.sites.begin());
            if (!seen[idx]) {
                seen[idx] = 1;
                ++count;
                stack.push_back(static_cast<int>(idx));
            }
        }
    }
    return count == x.sites.size();
}

std::vector<std::vector<Polymer>> enumerate_polymers(int d, int max_size) {
    if (d < 1 || d > 3) throw capacity_error("dimensions 1..3 supported");
    if (max_size < 1 || max_size > 8)
        throw capacity_error("polymer enumeration supports sizes 1..8");
    std::vector<std::vector<Polymer>> by_size(max_size);
    by_size[0].push_back(Polymer{{Site{0, 0, 0}}});
    for (int size = 2; size <= max_size; ++size) {
        std::set<Polymer> grown;
        for (const Polymer& p : by_size[size - 2]) {
            for (const Site& s : p.sites) {
                for (const Site& t : neighbors(s, d)) {
                    if (contains(p, t)) continue;
                    Polymer q = p;
                    q.sites.insert(
                        std::lower_bound(q.sites.begin(), q.sites.end(), t), t);
                    grown.insert(std::move(q));
                }
            }
        }
        by_size[size - 1].assign(grown.begin(), grown.end());
    }
    return by_size;
}

PolymerInteraction polymer_interaction(const Polymer& x, const Polymer& y) {
    PolymerInteraction out;
    for (const Site& s : x.sites)
        if (contains(y, s)) {
            out.overlap = true;
            return out;
        }
    for (const Site& s : x.sites)
        for (const Site& t : y.sites) {
            const int dist = std::abs(s[0] - t[0]) + std::abs(s[1] - t[1]) +
                             std::abs(s[2] - t[2]);
            if (dist == 1) ++out.contacts;
        }
    return out;
}

double gamma_threshold(int d, double eta) {
    return 2.0 * std::pow(2.0 * d, -1.5) + 3.0 * d * eta + 2.0 * std::log(2.0 * d);
}

PolymerCriterion polymer_criterion(const PolymerModel& model, double a, int n_cut) {
    if (n_cut < 1 || n_cut > 8) throw capacity_error("n_cut <= 8 supported");
    const int d = model.d;
    PolymerCriterion out;
    const double x = std::exp(-(model.gamma - a - model.eta * d));
    const auto by_size = enumerate_polymers(d, n_cut);
    for (int n = 1; n <= n_cut; ++n) {
        const double count = static_cast<double>(by_size[n - 1].size());
        out.exact_part += count * (1.0 + 2.0 * d * model.eta * n) * std::pow(x, n);
    }
    // tail over n > n_cut with counts bounded by the walk count (2d)^{2n-3}
    const double twod = 2.0 * d;
    const double q = twod * twod * x;
    out.tail_convergent = q < 1.0;
    if (out.tail_convergent) {
        const double qn = std::pow(q, n_cut + 1);
        const double geo = qn / (1.0 - q);
        const double ngeo = qn * ((n_cut + 1) - n_cut * q) / ((1.0 - q) * (1.0 - q));
        out.tail = (geo + 2.0 * d * model.eta * ngeo) / (twod * twod * twod);
        out.lhs = out.exact_part + out.tail;
        out.ok = out.lhs <= a;
    } else {
        out.tail = std::numeric_limits<double>::infinity();
        out.lhs = out.tail;
        out.ok = false;
    }
    return out;
}

PolymerBoxResult polymer_box_Z(const PolymerModel& model, std::array<int, 3> extent,
                               int max_polymer_size, int series_order, double prune) {
    const int d = model.d;
    for (int c = d; c < 3; ++c) extent[c] = 1;
    const int ncells = extent[0] * extent[1] * extent[2];
    if (ncells > 64) throw capacity_error("box supports at most 64 cells");
    const auto cell_index = [&](const Site& s) {
        return (s[0] * extent[1] + s[1]) * extent[2] + s[2];
    };

    // all translates of origin-anchored shapes that fit strictly inside
    std::set<Polymer> placed;
    for (const auto& group : enumerate_polymers(d, max_polymer_size)) {
        for (const Polymer& p : group) {
            Site lo = p.sites.front(), hi = p.sites.front();
            for (const Site& s : p.sites)
                for (int c = 0; c < 3; ++c) {
                    lo[c] = std::min(lo[c], s[c]);
                    hi[c] = std::max(hi[c], s[c]);
                }
            Site t;
            for (t[0] = -lo[0]; t[0] <= extent[0] - 1 - hi[0]; ++t[0])
                for (t[1] = -lo[1]; t[1] <= extent[1] - 1 - hi[1]; ++t[1])
                    for (t[2] = -lo[2]; t[2] <= extent[2] - 1 - hi[2]; ++t[2]) {
                        Polymer q;
                        for (Site s : p.sites) {
                            for (int c = 0; c < 3; ++c) s[c] += t[c];
                            q.sites.push_back(s);
                        }
                        std::sort(q.sites.begin(), q.sites.end());
                        placed.insert(std::move(q));
                    }
        }
    }
    std::vector<Polymer> poly(placed.begin(), placed.end());
    const int N = static_cast<int>(poly.size());
    if (N > 2000) throw capacity_error("box polymer count exceeds 2000");

    std::vector<std::uint64_t> cover(N, 0);
    std::vector<int> min_cell(N, 0);
    for (int i = 0; i < N; ++i) {
        int mc = ncells;
        for (const Site& s : poly[i].sites) {
            const int c = cell_index(s);
            cover[i] |= std::uint64_t{1} << c;
            mc = std::min(mc, c);
        }
        min_cell[i] = mc;
    }
    std::vector<std::vector<int>> at_cell(ncells);
    for (int i = 0; i < N; ++i) at_cell[min_cell[i]].push_back(i);

    std::vector<std::vector<std::int16_t>> contacts(N, std::vector<std::int16_t>(N, 0));
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            const auto inter = polymer_interaction(poly[i], poly[j]);
            const std::int16_t c = inter.overlap ? std::int16_t{-1}
                                                 : static_cast<std::int16_t>(inter.contacts);
            contacts[i][j] = contacts[j][i] = c;
        }

    std::vector<double> w(N);
    for (int i = 0; i < N; ++i) w[i] = std::exp(-model.gamma * poly[i].size());

    // exact Z: each polymer is placed exactly when the scan reaches its
    // minimal cell, so every non-overlapping family is counted once
    double z_exact = 0.0;
    std::vector<int> family;
    std::function<void(int, std::uint64_t, double)> rec = [&](int cell,
                                                              std::uint64_t mask,
                                                              double weight) {
        while (cell < ncells && (mask >> cell & 1)) ++cell;
        if (cell == ncells) {
            z_exact += weight;
            return;
        }
        rec(cell + 1, mask, weight); // cell stays empty
        for (int i : at_cell[cell]) {
            if (cover[i] & mask) continue;
            double wf = w[i];
            bool overlap = false;
            for (int q : family) {
                if (contacts[i][q] < 0) {
                    overlap = true;
                    break;
                }
                wf *= std::exp(model.eta * contacts[i][q]);
            }
            if (overlap) continue;
            family.push_back(i);
            rec(cell + 1, mask | cover[i], weight * wf);
            family.pop_back();
        }
    };
    rec(0, 0, 1.0);

    // induced discrete model
    std::vector<Complex> weights(w.begin(), w.end());
    std::vector<Complex> u;
    std::vector<bool> hard;
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            const bool hc = i == j || contacts[i][j] < 0;
            hard.push_back(hc);
            u.push_back(hc ? Complex{} : Complex{-model.eta * contacts[i][j], 0.0});
        }
    DiscreteModel dm = DiscreteModel::from_u(std::move(weights), std::move(u),
                                             std::move(hard));
    std::vector<double> bvec(N), avec(N);
    const double a = std::pow(2.0 * d, -1.5);
    for (int i = 0; i < N; ++i) {
        bvec[i] = model.eta * d * poly[i].size();
        avec[i] = a * poly[i].size();
    }
    dm.set_b(std::move(bvec));
    dm.set_a(std::move(avec));

    ClusterOptions opts;
    opts.prune = prune;
    const SeriesResult series = cluster_logZ(dm, series_order, opts);

    PolymerBoxResult out;
    out.z_exact = z_exact;
    out.logZ_series = series.partial.back().real();
    out.gap = std::abs(std::log(z_exact) - out.logZ_series);
    out.states = N;
    out.model = std::move(dm);
    return out;
}

} // namespace clusterforge
