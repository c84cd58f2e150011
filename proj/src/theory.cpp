#include "debatelab/theory.hpp"

#include <algorithm>
#include <cmath>

namespace debatelab {

double predict_one_step(const DriftInputs& in) {
    if (!(in.alpha_norm > 0.0)) {
        throw Error("alpha norm must be positive");
    }
    if (in.critique_mass < 0.0 || in.social_weight < 0.0 || in.neighborhood_size < 0) {
        throw Error("drift inputs must be nonnegative");
    }
    const double social = in.social_weight * in.neighborhood_size;
    const double z = in.alpha_norm + in.critique_mass + social;
    if (!(z > 0.0)) {
        throw Error("drift denominator must be positive");
    }
    return in.p + in.delta / z + social * (in.p_bar_neighborhood - in.p) / z;
}

double norm_closed_form(double s0, double c, int t) {
    if (!(s0 > 0.0) || c < 0.0 || t < 0) {
        throw Error("norm recursion needs s0 > 0, c >= 0, t >= 0");
    }
    return s0 + static_cast<double>(t) * c;
}

AccumulatedBounds accumulated_bounds(double p0, double mu, double s0, double c, int T) {
    if (!(c > 0.0)) {
        throw Error("accumulated bounds need a positive per-round mass c");
    }
    if (!(s0 > 0.0) || T < 1) {
        throw Error("accumulated bounds need s0 > 0 and T >= 1");
    }
    double harmonic_sum = 0.0;
    for (int t = 1; t <= T; ++t) {
        harmonic_sum += 1.0 / (s0 + static_cast<double>(t) * c);
    }
    AccumulatedBounds out;
    out.harmonic = p0 + mu * harmonic_sum;
    out.logarithmic = p0 + (mu / c) * std::log((s0 + static_cast<double>(T + 1) * c) / (s0 + c));
    return out;
}

double effective_ensemble_size(int num_agents, double rho) {
    if (num_agents < 1) {
        throw Error("need at least one agent");
    }
    if (rho < 0.0 || rho > 1.0) {
        throw Error("rho must lie in [0,1]");
    }
    return num_agents / (1.0 + (num_agents - 1) * rho);
}

VoteBound vote_error_bound(const VoteBoundInputs& in) {
    if (!(in.gap > 0.0)) {
        throw GapDegenerateError("vote bound needs a positive top-two gap");
    }
    if (in.answer_count < 2) {
        throw Error("need at least two answers");
    }
    const double n_eff = effective_ensemble_size(in.num_agents, in.rho);
    VoteBound out;
    out.value = in.answer_count / (n_eff * in.gap * in.gap);
    out.vacuous = out.value >= 1.0;
    return out;
}

L1GapVerdict check_l1_gap(std::span<const double> p_hat, std::span<const double> p) {
    if (p_hat.size() != p.size() || p.size() < 2) {
        throw DimensionMismatchError("distributions must share a dimension of at least two");
    }
    if (!(p[0] > p[1])) {
        throw Error("p must be sorted with a strict top-two gap");
    }
    for (std::size_t k = 2; k < p.size(); ++k) {
        if (p[k] > p[k - 1]) {
            throw Error("p must be sorted in nonincreasing order");
        }
    }

    L1GapVerdict out;
    out.gap = p[0] - p[1];
    for (std::size_t k = 1; k < p_hat.size(); ++k) {
        if (p_hat[k] >= p_hat[0]) {
            out.vote_error = true;  // tie counts as an error
            break;
        }
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
        out.l1 += std::abs(p_hat[k] - p[k]);
    }
    out.holds = !out.vote_error || out.l1 >= out.gap - 1e-12;
    return out;
}

std::vector<Label> copy_mixture_sample(std::span<const double> p, double lambda, int num_agents,
                                       RngStream& rng) {
    if (lambda < 0.0 || lambda > 1.0) {
        throw Error("copy probability must lie in [0,1]");
    }
    if (num_agents < 1) {
        throw Error("need at least one agent");
    }
    const Label shared = rng.categorical(p) + 1;
    std::vector<Label> out(static_cast<std::size_t>(num_agents));
    for (int i = 0; i < num_agents; ++i) {
        out[static_cast<std::size_t>(i)] =
            rng.bernoulli(lambda) ? shared : rng.categorical(p) + 1;
    }
    return out;
}

CorrelationEstimate estimate_correlation(const std::vector<std::vector<Label>>& panels, int K) {
    if (panels.size() < 2) {
        throw Error("correlation estimate needs at least two replicates");
    }
    const std::size_t R = panels.size();
    const std::size_t N = panels.front().size();
    if (N < 2) {
        throw Error("correlation estimate needs at least two agents");
    }
    for (const auto& row : panels) {
        if (row.size() != N) {
            throw DimensionMismatchError("ragged label panel");
        }
    }

    CorrelationEstimate out;
    out.raw = -1.0;
    std::vector<std::size_t> hit_index;
    hit_index.reserve(N);
    for (int k = 1; k <= K; ++k) {
        // integer tallies: per-column hits and joint hits per pair
        std::vector<long long> col_hits(N, 0);
        std::vector<long long> pair_hits(N * N, 0);
        for (const auto& row : panels) {
            hit_index.clear();
            for (std::size_t a = 0; a < N; ++a) {
                if (row[a] == k) {
                    hit_index.push_back(a);
                    ++col_hits[a];
                }
            }
            for (std::size_t i = 0; i < hit_index.size(); ++i) {
                for (std::size_t j = i + 1; j < hit_index.size(); ++j) {
                    ++pair_hits[hit_index[i] * N + hit_index[j]];
                }
            }
        }

        long long total_hits = 0;
        for (long long h : col_hits) {
            total_hits += h;
        }
        const double pk = static_cast<double>(total_hits) / static_cast<double>(R * N);
        if (pk <= 0.0 || pk >= 1.0) {
            continue;  // no variance to normalize by
        }
        ++out.labels_used;
        const double denom = pk * (1.0 - pk);

        for (std::size_t a = 0; a < N; ++a) {
            const double mean_a = static_cast<double>(col_hits[a]) / static_cast<double>(R);
            for (std::size_t b = a + 1; b < N; ++b) {
                const double mean_b = static_cast<double>(col_hits[b]) / static_cast<double>(R);
                const double joint =
                    static_cast<double>(pair_hits[a * N + b]) / static_cast<double>(R);
                const double cov = joint - mean_a * mean_b;  // population covariance
                out.raw = std::max(out.raw, cov / denom);
            }
        }
    }
    if (out.labels_used == 0) {
        throw Error("no label has an interior pooled frequency");
    }
    out.clamped = std::clamp(out.raw, 0.0, 1.0);
    return out;
}

}  // namespace debatelab
