#include "debatelab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "debatelab/debate.hpp"
#include "debatelab/theory.hpp"

namespace debatelab {

namespace {

int scaled(int replicates, const VerifyOptions& options) {
    const long long r =
        static_cast<long long>(replicates) * options.replicate_scale_percent / 100;
    return static_cast<int>(std::max(r, 200LL));
}

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

CheckResult make_check(std::string name, double predicted, double empirical, double se,
                       bool pass, std::string note = {}) {
    return CheckResult{std::move(name), predicted, empirical, se, pass, std::move(note)};
}

// |empirical - predicted| <= 3 se, with a tiny absolute floor so that
// exact (zero-variance) quantities survive float accumulation noise
CheckResult three_sigma_check(std::string name, double predicted, double empirical, double se) {
    const bool pass = std::abs(empirical - predicted) <= 3.0 * se + 1e-12;
    return make_check(std::move(name), predicted, empirical, se, pass);
}

DebateConfig martingale_config(const VerifyOptions& options) {
    DebateConfig config;
    config.num_agents = 5;
    config.rounds = 6;
    config.answer_count = 4;
    config.topology.variant = Decentralized{true};
    config.social_weight = 1.0;
    config.critique = CritiqueModel::proportional(1.0);
    config.init = Homogeneous{{2.0, 1.0, 1.0, 1.0}};
    config.seed = options.seed;
    config.replicates = scaled(20000, options);
    return config;
}

std::vector<double> agent0_belief_metric(const Trajectory& traj) {
    std::vector<double> out;
    out.reserve(traj.rounds.size());
    for (const auto& rec : traj.rounds) {
        out.push_back(rec.p[0]);
    }
    return out;
}

SuiteReport run_martingale(const VerifyOptions& options) {
    SuiteReport report{"martingale", {}};
    const DebateConfig config = martingale_config(options);
    const ReplicateSummary summary = replicate(config, agent0_belief_metric, options.threads);
    for (int t = 0; t <= config.rounds; ++t) {
        report.checks.push_back(three_sigma_check("p_t flat at t=" + std::to_string(t), 0.4,
                                                  summary.mean[static_cast<std::size_t>(t)],
                                                  summary.se[static_cast<std::size_t>(t)]));
    }
    return report;
}

SuiteReport run_drift(const VerifyOptions& options) {
    SuiteReport report{"drift", {}};

    // worked one-step numbers
    const double one_step = predict_one_step(DriftInputs{0.5, 4.0, 1.0, 1.0, 3, 0.2, 0.5});
    report.checks.push_back(make_check("one-step worked example", 0.525, one_step, 0.0,
                                       std::abs(one_step - 0.525) < 1e-15));
    const double with_social = predict_one_step(DriftInputs{0.5, 4.0, 1.0, 1.0, 3, 0.0, 0.7});
    report.checks.push_back(make_check("one-step neighbourhood example", 0.575, with_social, 0.0,
                                       std::abs(with_social - 0.575) < 1e-15));

    DebateConfig config = martingale_config(options);
    const double mu = 0.05;
    config.critique = CritiqueModel::oracle_shift(1.0, mu);
    const ReplicateSummary summary = replicate(config, agent0_belief_metric, options.threads);

    // iterate the one-step prediction along the norm closed form
    const double s0 = 5.0;
    const double c = 1.0 + 1.0 * 5.0;
    double predicted = 0.4;
    report.checks.push_back(three_sigma_check("predicted p at t=0", predicted, summary.mean[0],
                                              summary.se[0]));
    for (int t = 1; t <= config.rounds; ++t) {
        const double norm_before = norm_closed_form(s0, c, t - 1);
        predicted = predict_one_step(DriftInputs{predicted, norm_before, 1.0, 1.0, 5, mu, predicted});
        report.checks.push_back(three_sigma_check("predicted p at t=" + std::to_string(t),
                                                  predicted,
                                                  summary.mean[static_cast<std::size_t>(t)],
                                                  summary.se[static_cast<std::size_t>(t)]));
    }
    return report;
}

SuiteReport run_decomposition(const VerifyOptions& options) {
    SuiteReport report{"decomposition", {}};

    DebateConfig config;
    config.num_agents = 3;
    config.rounds = 1;
    config.answer_count = 2;
    config.topology.variant = Decentralized{true};
    config.social_weight = 1.0;
    config.critique = CritiqueModel::proportional(1.0);
    config.init = PerAgent{{{3.0, 1.0}, {1.0, 1.0}, {1.0, 3.0}}, {}};
    config.seed = options.seed + 1;
    config.replicates = scaled(20000, options);

    const std::vector<double> p0 = {0.75, 0.5, 0.25};
    const std::vector<double> s0 = {4.0, 2.0, 4.0};
    const double p_bar = 0.5;

    const ReplicateSummary summary = replicate(
        config,
        [](const Trajectory& traj) {
            return std::vector<double>{traj.rounds[1].p[0], traj.rounds[1].p[1],
                                       traj.rounds[1].p[2]};
        },
        options.threads);

    for (int i = 0; i < 3; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const double full = predict_one_step(DriftInputs{p0[idx], s0[idx], 1.0, 1.0, 3, 0.0, p_bar});
        report.checks.push_back(three_sigma_check(
            "full decomposition, agent " + std::to_string(i), full, summary.mean[idx],
            summary.se[idx]));
    }
    // with unequal beliefs the neighbourhood term is required: the
    // martingale-only prediction p0 must fail for agent 0
    const bool fails = std::abs(summary.mean[0] - p0[0]) > 3.0 * summary.se[0];
    report.checks.push_back(make_check("martingale-only prediction fails for agent 0", p0[0],
                                       summary.mean[0], summary.se[0], fails,
                                       "pass means the no-neighbourhood prediction is rejected"));

    // both terms active at once: an advantaged critique on top of the
    // neighbourhood pull
    const double mu = 0.05;
    config.critique = CritiqueModel::oracle_shift(1.0, mu);
    config.seed = options.seed + 12;
    const ReplicateSummary shifted = replicate(
        config,
        [](const Trajectory& traj) {
            return std::vector<double>{traj.rounds[1].p[0], traj.rounds[1].p[1],
                                       traj.rounds[1].p[2]};
        },
        options.threads);
    for (int i = 0; i < 3; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const double full =
            predict_one_step(DriftInputs{p0[idx], s0[idx], 1.0, 1.0, 3, mu, p_bar});
        report.checks.push_back(three_sigma_check(
            "decomposition with advantage, agent " + std::to_string(i), full, shifted.mean[idx],
            shifted.se[idx]));
    }
    return report;
}

SuiteReport run_norm(const VerifyOptions& options) {
    SuiteReport report{"norm", {}};
    RngStream rng(options.seed + 2);

    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        DebateConfig config;
        config.num_agents = 1 + static_cast<int>(rng.below(8));
        config.rounds = static_cast<int>(rng.below(11));
        config.answer_count = 2 + static_cast<int>(rng.below(5));
        config.social_weight = 2.0 * rng.next_double();
        const double mass = rng.bernoulli(0.25) ? 0.0 : 0.1 + 2.9 * rng.next_double();
        config.critique =
            mass > 0.0 ? CritiqueModel::proportional(mass) : CritiqueModel::null_critique();
        if (rng.bernoulli(0.5)) {
            config.topology.variant = Decentralized{rng.bernoulli(0.8)};
        } else {
            Sparse sparse;
            sparse.include_self = true;
            sparse.adjacency.resize(static_cast<std::size_t>(config.num_agents));
            for (int i = 0; i < config.num_agents; ++i) {
                auto& row = sparse.adjacency[static_cast<std::size_t>(i)];
                row.push_back(i);
                for (int j = 0; j < config.num_agents; ++j) {
                    if (j != i && rng.bernoulli(0.5)) {
                        row.push_back(j);
                    }
                }
            }
            config.topology.variant = std::move(sparse);
        }
        std::vector<double> alpha0(static_cast<std::size_t>(config.answer_count));
        for (double& a : alpha0) {
            a = 0.2 + 4.8 * rng.next_double();
        }
        config.init = Homogeneous{alpha0};
        config.seed = options.seed + 100 + static_cast<std::uint64_t>(trial);
        config.replicates = 1;
        config.validate();

        const Trajectory traj = run_debate(config, RngStream(config.seed).child(0));
        const double s0 = std::accumulate(alpha0.begin(), alpha0.end(), 0.0);
        for (int t = 0; t <= config.rounds; ++t) {
            const auto& rec = traj.rounds[static_cast<std::size_t>(t)];
            for (int i = 0; i < config.num_agents; ++i) {
                const double c =
                    mass + config.social_weight *
                               static_cast<double>(
                                   config.topology.neighbors(i, config.num_agents).size());
                const double expected = norm_closed_form(s0, c, t);
                const double rel =
                    std::abs(rec.alpha_norm[static_cast<std::size_t>(i)] - expected) / expected;
                worst = std::max(worst, rel);
            }
        }
    }
    report.checks.push_back(make_check("norm identity over 50 random configs", 0.0, worst, 0.0,
                                       worst < 1e-10, "max relative error"));
    return report;
}

SuiteReport run_accumulated(const VerifyOptions& options) {
    SuiteReport report{"accumulated", {}};

    // worked example
    const AccumulatedBounds worked = accumulated_bounds(0.5, 0.1, 4.0, 4.0, 3);
    const double exact_harmonic = 0.5 + 0.1 * (1.0 / 8.0 + 1.0 / 12.0 + 1.0 / 16.0);
    const double exact_log = 0.5 + 0.025 * std::log(20.0 / 8.0);
    report.checks.push_back(make_check("worked harmonic bound", exact_harmonic, worked.harmonic,
                                       0.0,
                                       std::abs(worked.harmonic - exact_harmonic) < 1e-12 &&
                                           std::abs(worked.harmonic - 0.527083) < 1e-6));
    report.checks.push_back(make_check("worked log bound", exact_log, worked.logarithmic, 0.0,
                                       std::abs(worked.logarithmic - exact_log) < 1e-12 &&
                                           std::abs(worked.logarithmic - 0.522907) < 1e-6));

    // deterministic ordering on random draws
    RngStream rng(options.seed + 3);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double p0 = rng.next_double();
        const double mu = 2.0 * rng.next_double();
        const double s0 = 0.05 + 9.95 * rng.next_double();
        const double c = 0.05 + 9.95 * rng.next_double();
        const int T = 1 + static_cast<int>(rng.below(50));
        const AccumulatedBounds b = accumulated_bounds(p0, mu, s0, c, T);
        violations += (b.harmonic < b.logarithmic);
    }
    report.checks.push_back(make_check("harmonic >= log on 1000 draws", 0.0, violations, 0.0,
                                       violations == 0, "violation count"));

    // positive-drift scenarios: empirical mean must clear both lower bounds
    struct Scenario {
        const char* name;
        DebateConfig config;
        double mu;
        double p0;
        double s0;
        double c;
    };
    std::vector<Scenario> scenarios;
    {
        DebateConfig config = martingale_config(options);
        config.critique = CritiqueModel::oracle_shift(1.0, 0.05);
        config.seed = options.seed + 4;
        scenarios.push_back({"N=5 w=1 mu=0.05", config, 0.05, 0.4, 5.0, 6.0});
    }
    {
        DebateConfig config;
        config.num_agents = 1;
        config.rounds = 6;
        config.answer_count = 3;
        config.topology.variant = Decentralized{true};
        config.social_weight = 0.0;
        config.critique = CritiqueModel::oracle_shift(1.0, 0.1);
        config.init = Homogeneous{{1.0, 1.0, 1.0}};
        config.seed = options.seed + 5;
        config.replicates = scaled(20000, options);
        scenarios.push_back({"N=1 w=0 mu=0.1", config, 0.1, 1.0 / 3.0, 3.0, 1.0});
    }
    for (auto& sc : scenarios) {
        const ReplicateSummary summary =
            replicate(sc.config, agent0_belief_metric, options.threads);
        const int T = sc.config.rounds;
        const AccumulatedBounds bounds = accumulated_bounds(sc.p0, sc.mu, sc.s0, sc.c, T);
        const double emp = summary.mean[static_cast<std::size_t>(T)];
        const double se = summary.se[static_cast<std::size_t>(T)];
        const bool ordered = emp >= bounds.harmonic - 3.0 * se - 1e-12 &&
                             bounds.harmonic >= bounds.logarithmic;
        report.checks.push_back(make_check(std::string("E[p_T] >= harmonic >= log, ") + sc.name,
                                           bounds.harmonic, emp, se, ordered,
                                           "log bound " + format_value(bounds.logarithmic)));
    }
    return report;
}

SuiteReport run_l1(const VerifyOptions& options) {
    SuiteReport report{"l1", {}};

    {
        const L1GapVerdict v = check_l1_gap(std::vector<double>{0.4, 0.6},
                                            std::vector<double>{0.6, 0.4});
        report.checks.push_back(make_check("worked example gap", 0.4, v.l1, 0.0,
                                           v.vote_error && v.holds && std::abs(v.l1 - 0.4) < 1e-12));
    }
    {
        const L1GapVerdict v = check_l1_gap(std::vector<double>{0.7, 0.3},
                                            std::vector<double>{0.6, 0.4});
        report.checks.push_back(
            make_check("correct vote is vacuous", 0.0, v.l1, 0.0, !v.vote_error && v.holds));
    }
    {
        const L1GapVerdict v = check_l1_gap(std::vector<double>{0.5, 0.5},
                                            std::vector<double>{0.6, 0.4});
        report.checks.push_back(make_check("tie counts as error, boundary", 0.2, v.l1, 0.0,
                                           v.vote_error && v.holds && std::abs(v.l1 - 0.2) < 1e-12));
    }

    RngStream rng(options.seed + 6);
    const int target = 100000;
    int violations = 0, seen = 0;
    long long attempts = 0;
    while (seen < target && attempts < 40LL * target) {
        ++attempts;
        const int K = 2 + static_cast<int>(rng.below(5));
        std::vector<double> p(static_cast<std::size_t>(K));
        std::vector<double> ones(static_cast<std::size_t>(K), 1.0);
        p = rng.dirichlet(ones);
        std::sort(p.begin(), p.end(), std::greater<>());
        if (p[0] - p[1] < 1e-9) {
            continue;
        }
        std::vector<double> p_hat;
        if (rng.bernoulli(0.5)) {
            p_hat = rng.dirichlet(ones);
        } else {
            // small empirical panels produce ties and sparse histograms
            const int n = 3 + static_cast<int>(rng.below(13));
            std::vector<int> tally(static_cast<std::size_t>(K), 0);
            for (int i = 0; i < n; ++i) {
                ++tally[static_cast<std::size_t>(rng.categorical(p))];
            }
            p_hat.resize(static_cast<std::size_t>(K));
            for (int k = 0; k < K; ++k) {
                p_hat[static_cast<std::size_t>(k)] =
                    static_cast<double>(tally[static_cast<std::size_t>(k)]) / n;
            }
        }
        const L1GapVerdict v = check_l1_gap(p_hat, p);
        if (!v.vote_error) {
            continue;
        }
        ++seen;
        violations += !v.holds;
    }
    report.checks.push_back(make_check("zero violations on plurality-error instances", 0.0,
                                       violations, 0.0, violations == 0 && seen == target,
                                       std::to_string(seen) + " error instances"));
    return report;
}

SuiteReport run_votebound(const VerifyOptions& options) {
    SuiteReport report{"votebound", {}};
    const std::vector<double> p = {0.7, 0.3};
    const int N = 51;
    const int R = scaled(100000, options);

    const std::vector<double> lambdas = {0.0, 0.3, 0.6};
    for (std::size_t cell = 0; cell < lambdas.size(); ++cell) {
        const double lambda = lambdas[cell];
        RngStream rng = RngStream(options.seed + 7).child(cell);
        std::vector<std::vector<Label>> panels(static_cast<std::size_t>(R));
        int errors = 0;
        for (int r = 0; r < R; ++r) {
            panels[static_cast<std::size_t>(r)] = copy_mixture_sample(p, lambda, N, rng);
            const VoteResult vote = plurality_vote(panels[static_cast<std::size_t>(r)], 2);
            errors += (vote.winner != 1 || vote.tie);
        }
        const double err = static_cast<double>(errors) / R;
        const double se = std::sqrt(err * (1.0 - err) / R);
        const VoteBound bound =
            vote_error_bound(VoteBoundInputs{2, N, lambda * lambda, p[0] - p[1]});
        std::string tag = "lambda=" + format_value(lambda);
        report.checks.push_back(make_check(
            "plurality error within bound, " + tag, bound.value, err, se,
            err <= bound.value + 3.0 * se, bound.vacuous ? "bound vacuous" : ""));

        const CorrelationEstimate rho = estimate_correlation(panels, 2);
        report.checks.push_back(make_check("rho_hat near lambda^2, " + tag, lambda * lambda,
                                           rho.clamped, 0.0,
                                           std::abs(rho.clamped - lambda * lambda) <= 0.05));
    }
    return report;
}

SuiteReport run_correlation(const VerifyOptions& options) {
    SuiteReport report{"correlation", {}};
    const int R = scaled(100000, options);
    const std::vector<double> p = {0.5, 0.3, 0.2};

    {
        RngStream rng(options.seed + 8);
        std::vector<std::vector<Label>> panels(static_cast<std::size_t>(R));
        for (auto& row : panels) {
            row.resize(5);
            for (auto& y : row) {
                y = rng.categorical(p) + 1;
            }
        }
        const CorrelationEstimate rho = estimate_correlation(panels, 3);
        report.checks.push_back(
            make_check("iid panel", 0.0, rho.clamped, 0.0, rho.clamped < 0.05));
    }
    {
        RngStream rng(options.seed + 9);
        std::vector<std::vector<Label>> panels(static_cast<std::size_t>(R));
        for (auto& row : panels) {
            row.assign(5, rng.categorical(p) + 1);
        }
        const CorrelationEstimate rho = estimate_correlation(panels, 3);
        report.checks.push_back(make_check("identical columns", 1.0, rho.clamped, 0.0,
                                           std::abs(rho.clamped - 1.0) < 1e-9));
    }
    {
        RngStream rng(options.seed + 10);
        std::vector<std::vector<Label>> panels(static_cast<std::size_t>(R));
        for (auto& row : panels) {
            row = copy_mixture_sample(p, 0.3, 5, rng);
        }
        const CorrelationEstimate rho = estimate_correlation(panels, 3);
        report.checks.push_back(make_check("copy mixture lambda=0.3", 0.09, rho.clamped, 0.0,
                                           std::abs(rho.clamped - 0.09) <= 0.05));
    }
    return report;
}

SuiteReport run_equivalence(const VerifyOptions& options) {
    SuiteReport report{"equivalence", {}};
    RngStream rng(options.seed + 11);
    const int samples = 100000;  // the 0.01 TV threshold is calibrated to this size

    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const int K = 2 + static_cast<int>(rng.below(5));
        std::vector<double> alpha(static_cast<std::size_t>(K));
        for (double& a : alpha) {
            a = 0.2 + 4.8 * rng.next_double();
        }
        const BeliefState belief{alpha, 0};
        const std::vector<double> mean = dirichlet_mean(alpha);

        std::vector<int> tally(static_cast<std::size_t>(K), 0);
        for (int s = 0; s < samples; ++s) {
            ++tally[static_cast<std::size_t>(sample_answer(belief, SampleMode::Compound, rng) - 1)];
        }
        double tv = 0.0;
        for (int k = 0; k < K; ++k) {
            tv += std::abs(static_cast<double>(tally[static_cast<std::size_t>(k)]) / samples -
                           mean[static_cast<std::size_t>(k)]);
        }
        worst = std::max(worst, 0.5 * tv);
    }
    report.checks.push_back(make_check("compound empirical TV to exact mean, 20 alphas", 0.0,
                                       worst, 0.0, worst < 0.01, "worst total variation"));
    return report;
}

// Rise-then-fall demonstration: a per-round decaying oracle advantage plus
// a growing tendency to follow the shared modal answer. Early rounds gain
// from the drift; later rounds herd onto whatever leads, correlation rises
// and vote accuracy falls back.
SuiteReport run_risefall(const VerifyOptions& options) {
    SuiteReport report{"risefall", {}};

    DebateConfig config;
    config.num_agents = 7;
    config.rounds = 12;
    config.answer_count = 4;
    config.topology.variant = Decentralized{true};
    config.social_weight = 0.15;
    config.init = Homogeneous{{1.2, 0.93, 0.93, 0.94}};
    config.seed = 0x52153ULL;  // pinned scenario seed
    config.replicates = scaled(20000, options);

    const double mass = 4.0;
    const double mu0 = 1.2;
    const double mu_decay = 0.35;
    const double follow_growth = 0.35;  // lambda_t = 1 - follow_growth^t

    const int R = config.replicates;
    const int T = config.rounds;
    std::vector<double> correct_sum(static_cast<std::size_t>(T) + 1, 0.0);

    const RngStream master(config.seed);
    const int K = config.answer_count;
    for (int r = 0; r < R; ++r) {
        const RngStream run_rng = master.child(static_cast<std::uint64_t>(r));
        std::vector<BeliefState> states = config.initial_states();
        for (int t = 0; t <= T; ++t) {
            const double lambda = 1.0 - std::pow(follow_growth, t);
            const double mu_cap = 0.99 * mass * (K - 1) * (1.0 - lambda) / K;
            const double mu = std::min(mu0 * std::pow(mu_decay, t), mu_cap);
            CritiqueModel critique = CritiqueModel::policy_backed(
                mass, [lambda, mu, mass, K](const DebateContext& ctx) {
                    std::vector<double> dist(static_cast<std::size_t>(K),
                                             (1.0 - lambda) / K);
                    dist[static_cast<std::size_t>(ctx.first_answer - 1)] += lambda;
                    const double off = mu / (mass * (K - 1));
                    for (int k = 0; k < K; ++k) {
                        dist[static_cast<std::size_t>(k)] +=
                            (k + 1 == ctx.correct_label) ? mu / mass : -off;
                    }
                    return dist;
                });
            auto [next, rec] = run_round_with_critique(states, config, critique, t,
                                                       run_rng.child(static_cast<std::uint64_t>(t)));
            states = std::move(next);
            const double hit = (rec.system_answer == config.correct_label) ? 1.0 : 0.0;
            correct_sum[static_cast<std::size_t>(t)] += hit;
        }
    }

    std::vector<double> acc(static_cast<std::size_t>(T) + 1);
    std::ostringstream curve;
    for (int t = 0; t <= T; ++t) {
        acc[static_cast<std::size_t>(t)] = correct_sum[static_cast<std::size_t>(t)] / R;
        curve << (t ? " " : "") << format_value(acc[static_cast<std::size_t>(t)]);
    }
    int peak = 1;
    for (int t = 1; t < T; ++t) {
        if (acc[static_cast<std::size_t>(t)] > acc[static_cast<std::size_t>(peak)]) {
            peak = t;
        }
    }
    const bool interior_peak = acc[static_cast<std::size_t>(peak)] > acc[0] &&
                               acc[static_cast<std::size_t>(peak)] > acc[static_cast<std::size_t>(T)];
    report.checks.push_back(make_check("interior peak round", static_cast<double>(peak),
                                       acc[static_cast<std::size_t>(peak)], 0.0, interior_peak,
                                       "per-round accuracy: " + curve.str()));
    return report;
}

}  // namespace

bool SuiteReport::pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass; });
}

std::vector<std::string> verification_suite_names() {
    return {"martingale", "drift", "decomposition", "norm",        "accumulated",
            "l1",         "votebound", "correlation",  "equivalence", "risefall"};
}

SuiteReport run_verification_suite(const std::string& name, const VerifyOptions& options) {
    static const std::map<std::string, SuiteReport (*)(const VerifyOptions&)> registry = {
        {"martingale", run_martingale},   {"drift", run_drift},
        {"decomposition", run_decomposition}, {"norm", run_norm},
        {"accumulated", run_accumulated}, {"l1", run_l1},
        {"votebound", run_votebound},     {"correlation", run_correlation},
        {"equivalence", run_equivalence}, {"risefall", run_risefall},
    };
    const auto it = registry.find(name);
    if (it == registry.end()) {
        throw ConfigError("unknown verification suite: " + name);
    }
    return it->second(options);
}

std::vector<SuiteReport> run_verification_suites(const std::vector<std::string>& selectors,
                                                 const VerifyOptions& options) {
    std::vector<SuiteReport> reports;
    if (selectors.empty()) {
        for (const std::string& name : verification_suite_names()) {
            reports.push_back(run_verification_suite(name, options));
        }
        return reports;
    }
    for (const std::string& name : selectors) {
        reports.push_back(run_verification_suite(name, options));
    }
    return reports;
}

}  // namespace debatelab
