#include "debatelab/dcm.hpp"

#include <cmath>
#include <string>

namespace debatelab {

std::vector<double> dirichlet_mean(std::span<const double> alpha) {
    if (alpha.size() < 2) {
        throw InvalidBeliefError("belief needs at least two answer components");
    }
    double total = 0.0;
    for (double a : alpha) {
        if (!(a > 0.0)) {
            throw InvalidBeliefError("belief pseudo-counts must be strictly positive");
        }
        total += a;
    }
    std::vector<double> mean(alpha.size());
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        mean[k] = alpha[k] / total;
    }
    return mean;
}

Label sample_answer(const BeliefState& belief, SampleMode mode, RngStream& rng) {
    const std::vector<double> mean = dirichlet_mean(belief.alpha);
    if (mode == SampleMode::Marginal) {
        return rng.categorical(mean) + 1;
    }
    const std::vector<double> theta = rng.dirichlet(belief.alpha);
    return rng.categorical(theta) + 1;
}

CountVector neighbor_counts(std::span<const Label> answers,
                            std::span<const int> neighborhood, int K) {
    CountVector out;
    out.counts.assign(static_cast<std::size_t>(K), 0);
    for (int j : neighborhood) {
        if (j < 0 || j >= static_cast<int>(answers.size())) {
            throw DimensionMismatchError("neighbourhood index " + std::to_string(j) +
                                         " outside the answer list");
        }
        const Label y = answers[static_cast<std::size_t>(j)];
        if (y < 1 || y > K) {
            throw DimensionMismatchError("answer label " + std::to_string(y) +
                                         " outside 1.." + std::to_string(K));
        }
        ++out.counts[static_cast<std::size_t>(y - 1)];
    }
    return out;
}

CritiqueModel CritiqueModel::null_critique() {
    return CritiqueModel{Kind::Null, 0.0, 0.0, {}};
}

CritiqueModel CritiqueModel::proportional(double mass) {
    return CritiqueModel{Kind::Proportional, mass, 0.0, {}};
}

CritiqueModel CritiqueModel::oracle_shift(double mass, double mu) {
    return CritiqueModel{Kind::OracleShift, mass, mu, {}};
}

CritiqueModel CritiqueModel::policy_backed(double mass, SecondTurnProvider provider) {
    return CritiqueModel{Kind::PolicyBacked, mass, 0.0, std::move(provider)};
}

void CritiqueModel::validate() const {
    if (kind == Kind::Null) {
        if (mass != 0.0) {
            throw Error("null critique must carry zero mass");
        }
        return;
    }
    if (!(mass > 0.0)) {
        throw Error("critique mass must be positive");
    }
    if (kind == Kind::PolicyBacked && !provider) {
        throw Error("policy-backed critique needs a provider");
    }
}

std::vector<double> make_critique(const CritiqueModel& model,
                                  std::span<const double> belief_mean,
                                  const DebateContext& context, RngStream& rng) {
    (void)rng;  // every current variant is deterministic given the context
    model.validate();
    const std::size_t K = belief_mean.size();

    switch (model.kind) {
        case CritiqueModel::Kind::Null:
            return std::vector<double>(K, 0.0);

        case CritiqueModel::Kind::Proportional: {
            std::vector<double> beta(K);
            for (std::size_t k = 0; k < K; ++k) {
                beta[k] = model.mass * belief_mean[k];
            }
            return beta;
        }

        case CritiqueModel::Kind::OracleShift: {
            const std::size_t correct = static_cast<std::size_t>(context.correct_label - 1);
            if (correct >= K) {
                throw DimensionMismatchError("correct label outside the answer set");
            }
            const double off = model.mu / static_cast<double>(K - 1);
            std::vector<double> beta(K);
            for (std::size_t k = 0; k < K; ++k) {
                beta[k] = model.mass * belief_mean[k] + (k == correct ? model.mu : -off);
                if (beta[k] < 0.0) {
                    throw CritiqueInfeasibleError(
                        "oracle shift mu=" + std::to_string(model.mu) +
                        " would drive a critique component negative");
                }
            }
            return beta;
        }

        case CritiqueModel::Kind::PolicyBacked: {
            std::vector<double> dist = model.provider(context);
            if (dist.size() != K) {
                throw DimensionMismatchError("second-turn distribution has wrong size");
            }
            double total = 0.0;
            for (double v : dist) {
                if (v < 0.0) {
                    throw Error("second-turn distribution has a negative entry");
                }
                total += v;
            }
            if (std::abs(total - 1.0) > 1e-9) {
                throw Error("second-turn distribution does not sum to one");
            }
            std::vector<double> beta(K);
            for (std::size_t k = 0; k < K; ++k) {
                beta[k] = model.mass * dist[k];
            }
            return beta;
        }
    }
    throw Error("unknown critique kind");
}

BeliefState update_belief(const BeliefState& belief, std::span<const double> beta,
                          const CountVector& counts, double w) {
    const std::size_t K = belief.alpha.size();
    if (beta.size() != K || counts.counts.size() != K) {
        throw DimensionMismatchError("belief, critique and counts must share one dimension");
    }
    BeliefState next = belief;
    for (std::size_t k = 0; k < K; ++k) {
        if (beta[k] < 0.0) {
            throw Error("critique components must be nonnegative");
        }
        next.alpha[k] = belief.alpha[k] + beta[k] + w * counts.counts[k];
    }
    return next;
}

double critique_advantage(double beta_correct_mean, double m_beta, double p) {
    return beta_correct_mean - m_beta * p;
}

}  // namespace debatelab
