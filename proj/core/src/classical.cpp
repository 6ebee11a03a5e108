#include "clusterforge/classical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "clusterforge/errors.hpp"
#include "clusterforge/expansion.hpp"
#include "clusterforge/graphs.hpp"
#include "clusterforge/rng.hpp"

namespace clusterforge {

PairPotential PairPotential::hard_rods(double sigma, double z) {
    PairPotential p;
    p.d = 1;
    p.family = Family::hard_core_only;
    p.r = sigma;
    p.B = 0.0;
    p.z = z;
    return p;
}

PairPotential PairPotential::square_well(int d, double r, double depth, double range,
                                         double B, double beta, double z) {
    if (range < r) throw model_error("well range below the core radius");
    PairPotential p;
    p.d = d;
    p.family = Family::square_well;
    p.r = r;
    p.well_depth = depth;
    p.well_range = range;
    p.B = B;
    p.beta = beta;
    p.z = z;
    return p;
}

double PairPotential::tail(double s) const {
    if (family == Family::square_well && s > r && s < well_range) return -well_depth;
    return 0.0;
}

double PairPotential::tail_cutoff() const {
    return family == Family::square_well ? well_range : r;
}

double ball_volume(int d) {
    return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double PairPotential::tail_abs_integral() const {
    if (family != Family::square_well) return 0.0;
    return well_depth * ball_volume(d) * (std::pow(well_range, d) - std::pow(r, d));
}

namespace {

double surface_area(int d) { return d * ball_volume(d); }

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int depth = 0) {
    const double c = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fc = f(c);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    const double lm = 0.5 * (a + c), rm = 0.5 * (c + b);
    const double left = (c - a) / 6.0 * (fa + 4.0 * f(lm) + fc);
    const double right = (b - c) / 6.0 * (fc + 4.0 * f(rm) + fb);
    if (depth > 40) return left + right;
    if (std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, c, tol / 2.0, depth + 1) +
           adaptive_simpson(f, c, b, tol / 2.0, depth + 1);
}

// |e^{-beta U(|y|)} - 1| at radius s (1 inside the core).
double mayer_f_abs(const PairPotential& p, double s) {
    if (s < p.r) return 1.0;
    return std::abs(std::exp(-p.beta * p.tail(s)) - 1.0);
}

double mayer_f_signed(const PairPotential& p, double s) {
    if (s < p.r) return -1.0;
    return std::exp(-p.beta * p.tail(s)) - 1.0;
}

} // namespace

double mayer_norm_integral(const PairPotential& p) {
    if (p.d < 1 || p.d > 3) throw capacity_error("dimensions 1..3 supported");
    double total = ball_volume(p.d) * std::pow(p.r, p.d);
    const double cutoff = p.tail_cutoff();
    if (cutoff > p.r) {
        const double sd = surface_area(p.d);
        total += adaptive_simpson(
            [&](double s) { return mayer_f_abs(p, s) * sd * std::pow(s, p.d - 1); },
            p.r, cutoff, 1e-8);
    }
    return total;
}

ClassicalCriterion criterion_classical(const PairPotential& p, ClassicalMode mode) {
    ClassicalCriterion out;
    double denom;
    if (mode == ClassicalMode::rue) {
        // a e^{-a} maximized at a = 1
        denom = std::exp(2.0 * p.beta * p.B) * mayer_norm_integral(p);
    } else {
        if (p.r <= 0.0 && p.tail_abs_integral() > 0.0)
            throw model_error("brf mode requires a hard core or a zero tail");
        denom = std::exp(p.beta * p.B) *
                (ball_volume(p.d) * std::pow(p.r, p.d) + p.beta * p.tail_abs_integral());
    }
    if (denom <= 0.0) {
        out.unbounded = true;
        out.z_max = std::numeric_limits<double>::infinity();
        out.margin = out.z_max;
        return out;
    }
    out.z_max = std::exp(-1.0) / denom;
    out.margin = out.z_max - p.z;
    return out;
}

namespace {

// Exact signed volume sum for 1D hard rods at sigma = 1, computed over the
// cells of the integer-translate arrangement: with x_1 = 0 and x_j = k_j + f_j,
// f_j in (0,1) distinct, the constraint |x_i - x_j| < 1 depends only on
// k_i - k_j and the order of the fractional parts. Each (k, order) cell has
// volume 1/(n-1)! and a fixed set of allowed pairs, so summing the signed
// connected-graph count over cells gives sum_G (-1)^{|E|} Vol_G exactly.
double rod_graph_volume_sum(int n) {
    const int m = n - 1;
    std::vector<int> k(m, -(n - 1));
    std::vector<int> perm(m);
    double total = 0.0;
    std::function<void(int)> loop_k = [&](int idx) {
        if (idx == m) {
            // rank[j] = position of f_{j+2} in the increasing order
            std::vector<int> rank(m);
            for (int i = 0; i < m; ++i) perm[i] = i;
            do {
                for (int i = 0; i < m; ++i) rank[perm[i]] = i;
                auto allowed = [&](int i, int j) {
                    // vertices 0..n-1; vertex 0 has k = 0 and minimal f
                    const int ki = i == 0 ? 0 : k[i - 1];
                    const int kj = j == 0 ? 0 : k[j - 1];
                    const int d = ki - kj;
                    if (d == 0) return true;
                    if (d != 1 && d != -1) return false;
                    // f_i < f_j required when k_i = k_j + 1
                    const int lo = d == 1 ? i : j;
                    const int hi = d == 1 ? j : i;
                    if (lo == 0) return true;   // f_1 = 0 is minimal
                    if (hi == 0) return false;
                    return rank[lo - 1] < rank[hi - 1];
                };
                total += connected_graph_sum(n, [&](int i, int j) {
                             return Complex{allowed(i, j) ? -1.0 : 0.0, 0.0};
                         }).real();
            } while (std::next_permutation(perm.begin(), perm.end()));
            return;
        }
        for (k[idx] = -(n - 1); k[idx] <= n - 2; ++k[idx]) loop_k(idx + 1);
    };
    loop_k(0);
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    return total / fact;
}

} // namespace

double mayer_coefficient_exact1d(double sigma, int n) {
    if (n < 1 || n > 5) throw capacity_error("exact coefficients support n <= 5");
    if (n == 1) return 1.0;
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    return std::pow(sigma, n - 1) * rod_graph_volume_sum(n) / fact;
}

double tonks_pressure(double sigma, double z) {
    if (z <= 0.0) return 0.0;
    double hi = 1.0;
    while (hi * std::exp(sigma * hi) < z) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mid * std::exp(sigma * mid) < z ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

PressureSum pressure_partial_sum(const PairPotential& p, int N) {
    if (p.d != 1 || p.family != PairPotential::Family::hard_core_only)
        throw model_error("exact pressure coefficients require 1D hard rods");
    PressureSum out;
    double zn = 1.0;
    for (int n = 1; n <= N; ++n) {
        zn *= p.z;
        const double bn = mayer_coefficient_exact1d(p.r, n);
        out.coefficients.push_back(bn);
        out.value += bn * zn;
    }
    out.tonks_reference = tonks_pressure(p.r, p.z);
    out.tonks_available = true;
    return out;
}

namespace {

struct SampledPoint {
    double x[3];
};

// Radial draw from density proportional to |f|(s) s^{d-1}, then a uniform
// direction. Uniforms come from the caller so antithetic mirroring works.
void sample_displacement(const PairPotential& p, double u_piece, double u_rad,
                         double u_dir1, double u_dir2, double* out) {
    const double core_mass = std::pow(p.r, p.d);
    double well_mass = 0.0;
    const double wf = p.family == PairPotential::Family::square_well
                          ? std::abs(std::exp(p.beta * p.well_depth) - 1.0)
                          : 0.0;
    if (wf > 0.0) well_mass = wf * (std::pow(p.well_range, p.d) - core_mass);
    const double total = core_mass + well_mass;
    double lo, hi;
    if (u_piece * total < core_mass) {
        lo = 0.0;
        hi = p.r;
    } else {
        lo = p.r;
        hi = p.well_range;
    }
    const double s =
        std::pow(u_rad * (std::pow(hi, p.d) - std::pow(lo, p.d)) + std::pow(lo, p.d),
                 1.0 / p.d);
    if (p.d == 1) {
        out[0] = u_dir1 < 0.5 ? -s : s;
        out[1] = out[2] = 0.0;
    } else if (p.d == 2) {
        const double th = 2.0 * M_PI * u_dir1;
        out[0] = s * std::cos(th);
        out[1] = s * std::sin(th);
        out[2] = 0.0;
    } else {
        const double ct = 2.0 * u_dir1 - 1.0;
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        const double ph = 2.0 * M_PI * u_dir2;
        out[0] = s * st * std::cos(ph);
        out[1] = s * st * std::sin(ph);
        out[2] = s * ct;
    }
}

double f_at(const PairPotential& p, const double* dx) {
    double s2 = 0.0;
    for (int c = 0; c < 3; ++c) s2 += dx[c] * dx[c];
    return mayer_f_signed(p, std::sqrt(s2));
}

} // namespace

MayerEstimate mayer_coefficient_mc(const PairPotential& p, int n, std::uint64_t seed,
                                   long long samples, int threads) {
    if (n < 1 || n > 5) throw capacity_error("Monte Carlo coefficients support n <= 5");
    if (n == 1) return {1.0, 0.0, samples};
    const double norm = mayer_norm_integral(p);
    if (norm <= 0.0) return {0.0, 0.0, samples};

    // materialize the graphs once; per graph pick a DFS spanning tree
    struct Graph {
        std::vector<std::pair<int, int>> edges;
        std::vector<std::pair<int, int>> tree; // (parent, child) in fill order
        std::vector<char> in_tree;
    };
    std::vector<Graph> graphs;
    ConnectedGraphStream stream(n);
    while (auto g = stream.next()) {
        Graph gr;
        gr.edges = g->edges;
        gr.in_tree.assign(gr.edges.size(), 0);
        std::vector<char> seen(n, 0);
        seen[0] = 1;
        std::vector<int> stack{0};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (std::size_t e = 0; e < gr.edges.size(); ++e) {
                const auto [a, b] = gr.edges[e];
                const int other = a == v ? b : (b == v ? a : -1);
                if (other < 0 || seen[other]) continue;
                seen[other] = 1;
                gr.in_tree[e] = 1;
                gr.tree.emplace_back(v, other);
                stack.push_back(other);
            }
        }
        graphs.push_back(std::move(gr));
    }

    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    const double scale = std::pow(norm, n - 1) / fact;

    auto sample_value = [&](long long j) {
        double value = 0.0;
        for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
            const Graph& gr = graphs[gi];
            SplitMix64 rng(derive_seed(seed, gi + 1, static_cast<std::uint64_t>(j)));
            std::vector<double> u(gr.tree.size() * 4);
            for (double& v : u) v = rng.next_u01();
            double pair_sum = 0.0;
            for (int anti = 0; anti < 2; ++anti) {
                std::vector<SampledPoint> pos(n, SampledPoint{{0, 0, 0}});
                double prod = 1.0;
                for (std::size_t t = 0; t < gr.tree.size(); ++t) {
                    double uu[4];
                    for (int q = 0; q < 4; ++q)
                        uu[q] = anti ? 1.0 - u[4 * t + q] : u[4 * t + q];
                    double dx[3];
                    sample_displacement(p, uu[0], uu[1], uu[2], uu[3], dx);
                    const auto [par, chi] = gr.tree[t];
                    for (int c = 0; c < 3; ++c) pos[chi].x[c] = pos[par].x[c] + dx[c];
                    prod *= f_at(p, dx) >= 0.0 ? 1.0 : -1.0;
                }
                for (std::size_t e = 0; e < gr.edges.size(); ++e) {
                    if (gr.in_tree[e]) continue;
                    const auto [a, b] = gr.edges[e];
                    double dx[3];
                    for (int c = 0; c < 3; ++c) dx[c] = pos[a].x[c] - pos[b].x[c];
                    prod *= f_at(p, dx); // extra edges carry f itself
                }
                pair_sum += prod;
            }
            value += 0.5 * pair_sum;
        }
        return scale * value;
    };

    const int nt = std::max(1, threads);
    // per-sample values are stored and reduced in sample order, so the result
    // is bit-identical for any thread count
    std::vector<double> vals(static_cast<std::size_t>(samples));
    auto worker = [&](int shard) {
        for (long long j = shard; j < samples; j += nt)
            vals[static_cast<std::size_t>(j)] = sample_value(j);
    };
    if (nt == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    double sum = 0.0, sq = 0.0;
    for (double v : vals) {
        sum += v;
        sq += v * v;
    }
    MayerEstimate est;
    est.samples = samples;
    est.value = sum / samples;
    const double var = std::max(0.0, sq / samples - est.value * est.value);
    est.std_error = std::sqrt(var / samples);
    return est;
}

DecayConstants decay_constants(const PairPotential& p, double kappa) {
    if (kappa < 0.0) throw std::invalid_argument("kappa >= 0 required");
    DecayConstants out;
    const double sd = surface_area(p.d);
    double c1 = adaptive_simpson(
        [&](double s) { return std::exp(kappa * s) * sd * std::pow(s, p.d - 1); }, 0.0,
        p.r, 1e-10);
    const double cutoff = p.tail_cutoff();
    if (cutoff > p.r)
        c1 += adaptive_simpson(
            [&](double s) {
                return std::exp(kappa * s) * mayer_f_abs(p, s) * sd * std::pow(s, p.d - 1);
            },
            p.r, cutoff, 1e-10);
    out.C1 = c1;
    double cinf = p.r > 0.0 ? std::exp(kappa * p.r) : 0.0;
    if (cutoff > p.r) {
        const double wf = std::abs(std::exp(p.beta * p.well_depth) - 1.0);
        cinf = std::max(cinf, std::exp(kappa * cutoff) * wf);
    }
    out.Cinf = cinf;
    if (out.C1 <= 0.0) {
        out.ok = true;
        return out;
    }
    const double load = p.z * std::exp(1.0 + 2.0 * p.beta * p.B) * out.C1;
    out.ok = load < 1.0;
    if (out.ok)
        out.prefactor = std::exp(2.0 + 4.0 * p.beta * p.B) * (out.Cinf / out.C1) /
                        (1.0 - load);
    return out;
}

} // namespace clusterforge
