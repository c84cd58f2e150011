#pragma once

// Closed-form calculators and estimators for the belief-drift and
// majority-vote analysis: one-step drift prediction, the pseudo-count norm
// recursion, accumulated-drift lower bounds, the correlation-adjusted vote
// error bound, the plurality-error l1 lemma, and a correlated-label
// generator/estimator pair for exercising the vote bound.

#include <span>
#include <vector>

#include "debatelab/dcm.hpp"
#include "debatelab/rng.hpp"

namespace debatelab {

struct DriftInputs {
    double p = 0.5;                 // current belief in the correct answer
    double alpha_norm = 1.0;        // S = ||alpha||_1
    double critique_mass = 0.0;     // m_beta
    double social_weight = 0.0;     // w
    int neighborhood_size = 0;      // |N(i)|
    double delta = 0.0;             // critique advantage
    double p_bar_neighborhood = 0.5;
};

/// Expected next-round belief,
///   p + delta/Z + w|N| (p_bar - p)/Z,  Z = S + m_beta + w|N|.
/// The mean-consistent case (p_bar == p) drops the neighbourhood term.
double predict_one_step(const DriftInputs& in);

/// ||alpha_t||_1 = S0 + t*C with C = m_beta + w|N|.
double norm_closed_form(double s0, double c, int t);

struct AccumulatedBounds {
    double harmonic = 0.0;
    double logarithmic = 0.0;
};

/// Lower bounds on E[p_T] under sustained per-round advantage mu:
///   harmonic:    p0 + mu * sum_{t=1..T} 1/(S0 + tC)
///   logarithmic: p0 + (mu/C) * log((S0 + (T+1)C) / (S0 + C))
/// For mu >= 0 the harmonic bound dominates the logarithmic one.
AccumulatedBounds accumulated_bounds(double p0, double mu, double s0, double c, int T);

/// N / (1 + (N-1) rho).
double effective_ensemble_size(int num_agents, double rho);

struct VoteBoundInputs {
    int answer_count = 2;  // K
    int num_agents = 1;    // N
    double rho = 0.0;      // pairwise indicator correlation, in [0,1]
    double gap = 0.0;      // Delta = p1 - p2, must be positive
};

struct VoteBound {
    double value = 0.0;
    bool vacuous = false;  // bound >= 1 carries no information
};

/// K (1 + (N-1) rho) / (N Delta^2) = K / (N_eff Delta^2), reported raw.
VoteBound vote_error_bound(const VoteBoundInputs& in);

struct L1GapVerdict {
    bool vote_error = false;  // argmax(p_hat) excludes label 1; ties count as errors
    double l1 = 0.0;          // ||p_hat - p||_1
    double gap = 0.0;         // Delta = p1 - p2
    bool holds = true;        // vacuous when no vote error, else l1 >= gap
};

/// Checks the deterministic implication "plurality error implies an l1
/// deviation of at least Delta". `p` must satisfy p1 > p2 >= ... >= pK.
L1GapVerdict check_l1_gap(std::span<const double> p_hat, std::span<const double> p);

/// N correlated labels: one shared draw from p is copied by each agent with
/// probability lambda, otherwise the agent draws fresh from p. Marginals
/// stay p and the pairwise indicator correlation is lambda^2 for every
/// label.
std::vector<Label> copy_mixture_sample(std::span<const double> p, double lambda, int num_agents,
                                       RngStream& rng);

struct CorrelationEstimate {
    double raw = 0.0;      // max over labels and agent pairs, unclamped
    double clamped = 0.0;  // raw clamped to [0,1]
    int labels_used = 0;   // labels with interior pooled frequency
};

/// rho_hat = max over labels k and agent pairs (a,b) of the population
/// covariance of the label indicators divided by p_k(1-p_k), with p_k the
/// pooled frequency. Labels with empty or full pooled frequency are
/// skipped; panels is an R x N matrix of labels (one row per replicate).
CorrelationEstimate estimate_correlation(const std::vector<std::vector<Label>>& panels, int K);

}  // namespace debatelab
