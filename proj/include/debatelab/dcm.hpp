#pragma once

// Belief, response and critique primitives of the Dirichlet-compound-
// multinomial debate model. An agent holds a positive pseudo-count vector
// alpha over K answers; its mean belief is alpha normalized to the simplex,
// answers are drawn compound (Dirichlet point, then categorical) or directly
// from the mean, and each round the vector grows by a fixed-mass private
// critique beta plus w times the observed neighbour answer counts.

#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "debatelab/errors.hpp"
#include "debatelab/rng.hpp"

namespace debatelab {

/// Answer labels are 1-based (1..K). By convention label 1 is the correct
/// answer; contexts can override this where noted. Agent ids are 0-based.
using Label = int;

struct BeliefState {
    std::vector<double> alpha;  // strictly positive pseudo-counts, size K
    int agent_id = 0;

    int answer_count() const { return static_cast<int>(alpha.size()); }
    double alpha_norm() const { return std::accumulate(alpha.begin(), alpha.end(), 0.0); }
};

/// Validates alpha (all components > 0, K >= 2) and returns alpha/||alpha||_1.
std::vector<double> dirichlet_mean(std::span<const double> alpha);

enum class SampleMode { Compound, Marginal };

/// Draws an answer label in 1..K. Compound: theta ~ Dirichlet(alpha), then
/// y ~ Categorical(theta). Marginal: y ~ Categorical(alpha/||alpha||_1).
/// The two modes are distributionally identical.
Label sample_answer(const BeliefState& belief, SampleMode mode, RngStream& rng);

struct CountVector {
    std::vector<int> counts;  // counts[k-1] = number of neighbours answering k

    int total() const { return std::accumulate(counts.begin(), counts.end(), 0); }
};

/// Tallies the answers of the given neighbourhood (0-based indices into
/// `answers`) into a K-bin count vector.
CountVector neighbor_counts(std::span<const Label> answers,
                            std::span<const int> neighborhood, int K);

/// Debate context handed to a critique: the prompt, the two candidate
/// answers in presentation order, and which label counts as correct.
struct DebateContext {
    int prompt_id = 0;
    Label first_answer = 1;
    Label second_answer = 1;
    Label correct_label = 1;
};

/// Second-turn answer distribution for a debate context (size K, on the
/// simplex). Implemented by the tabular-policy bridge in selfdebate.
using SecondTurnProvider = std::function<std::vector<double>(const DebateContext&)>;

/// Per-round private critique generator. Every variant produces a beta with
/// ||beta||_1 == mass and nonnegative components.
struct CritiqueModel {
    enum class Kind { Null, Proportional, OracleShift, PolicyBacked };

    Kind kind = Kind::Null;
    double mass = 0.0;  // m_beta, pseudo-count budget per round
    double mu = 0.0;    // OracleShift drift target
    SecondTurnProvider provider;  // PolicyBacked only

    static CritiqueModel null_critique();
    static CritiqueModel proportional(double mass);
    static CritiqueModel oracle_shift(double mass, double mu);
    static CritiqueModel policy_backed(double mass, SecondTurnProvider provider);

    void validate() const;
};

/// Produces the critique vector beta.
///   Null:         zero vector (mass 0)
///   Proportional: mass * belief_mean                      (advantage 0)
///   OracleShift:  mass * belief_mean + mu * d, where d puts +1 on the
///                 context's correct label and -1/(K-1) elsewhere, so the
///                 critique advantage is exactly mu and mass is preserved
///   PolicyBacked: mass * provider(context)
/// Throws CritiqueInfeasibleError if OracleShift would need a negative
/// component.
std::vector<double> make_critique(const CritiqueModel& model,
                                  std::span<const double> belief_mean,
                                  const DebateContext& context, RngStream& rng);

/// alpha' = alpha + beta + w * counts, componentwise.
BeliefState update_belief(const BeliefState& belief, std::span<const double> beta,
                          const CountVector& counts, double w);

/// delta = E[beta_correct] - m_beta * p.
double critique_advantage(double beta_correct_mean, double m_beta, double p);

}  // namespace debatelab
