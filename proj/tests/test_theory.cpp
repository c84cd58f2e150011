#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "debatelab/theory.hpp"

using namespace debatelab;

TEST_CASE("one-step prediction: martingale and worked cases") {
    CHECK(predict_one_step(DriftInputs{0.3, 6.0, 1.0, 1.0, 4, 0.0, 0.3}) == doctest::Approx(0.3));
    CHECK(predict_one_step(DriftInputs{0.5, 4.0, 1.0, 1.0, 3, 0.2, 0.5}) ==
          doctest::Approx(0.525).epsilon(1e-15));
    CHECK(predict_one_step(DriftInputs{0.5, 4.0, 1.0, 1.0, 3, 0.0, 0.7}) ==
          doctest::Approx(0.575).epsilon(1e-15));
    CHECK_THROWS_AS(predict_one_step(DriftInputs{0.5, 0.0, 1.0, 1.0, 3, 0.0, 0.5}), Error);
}

TEST_CASE("norm closed form") {
    CHECK(norm_closed_form(4, 4, 0) == 4);
    CHECK(norm_closed_form(4, 4, 3) == 16);
    CHECK_THROWS_AS(norm_closed_form(0, 1, 1), Error);
    CHECK_THROWS_AS(norm_closed_form(1, 1, -1), Error);
}

TEST_CASE("accumulated bounds match hand evaluation") {
    const AccumulatedBounds b = accumulated_bounds(0.5, 0.1, 4.0, 4.0, 3);
    CHECK(b.harmonic == doctest::Approx(0.5 + 0.1 * (1.0 / 8 + 1.0 / 12 + 1.0 / 16)).epsilon(1e-14));
    CHECK(b.harmonic == doctest::Approx(0.527083).epsilon(1e-5));
    CHECK(b.logarithmic == doctest::Approx(0.5 + 0.025 * std::log(2.5)).epsilon(1e-14));
    CHECK(b.logarithmic == doctest::Approx(0.522907).epsilon(1e-5));

    const AccumulatedBounds flat = accumulated_bounds(0.5, 0.0, 4.0, 4.0, 3);
    CHECK(flat.harmonic == 0.5);
    CHECK(flat.logarithmic == 0.5);

    CHECK_THROWS_AS(accumulated_bounds(0.5, 0.1, 4.0, 0.0, 3), Error);
}

TEST_CASE("harmonic bound dominates the log bound for nonnegative drift") {
    RngStream rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        const double p0 = rng.next_double();
        const double mu = 2.0 * rng.next_double();
        const double s0 = 0.05 + 9.95 * rng.next_double();
        const double c = 0.05 + 9.95 * rng.next_double();
        const int T = 1 + static_cast<int>(rng.below(50));
        const AccumulatedBounds b = accumulated_bounds(p0, mu, s0, c, T);
        CHECK(b.harmonic >= b.logarithmic);
    }
}

TEST_CASE("effective ensemble size") {
    CHECK(effective_ensemble_size(5, 0.0) == 5.0);
    CHECK(effective_ensemble_size(5, 1.0) == 1.0);
    CHECK(effective_ensemble_size(5, 0.25) == doctest::Approx(2.5));
    CHECK_THROWS_AS(effective_ensemble_size(5, 1.5), Error);
}

TEST_CASE("vote error bound") {
    const VoteBound small = vote_error_bound(VoteBoundInputs{2, 100, 0.0, 0.4});
    CHECK(small.value == doctest::Approx(0.125));
    CHECK_FALSE(small.vacuous);

    const VoteBound big = vote_error_bound(VoteBoundInputs{2, 5, 1.0, 0.5});
    CHECK(big.value == doctest::Approx(8.0));
    CHECK(big.vacuous);

    CHECK_THROWS_AS(vote_error_bound(VoteBoundInputs{2, 5, 0.0, 0.0}), GapDegenerateError);
}

TEST_CASE("l1 gap verdicts") {
    const L1GapVerdict err = check_l1_gap(std::vector<double>{0.4, 0.6},
                                          std::vector<double>{0.6, 0.4});
    CHECK(err.vote_error);
    CHECK(err.l1 == doctest::Approx(0.4));
    CHECK(err.gap == doctest::Approx(0.2));
    CHECK(err.holds);

    const L1GapVerdict ok = check_l1_gap(std::vector<double>{0.9, 0.1},
                                         std::vector<double>{0.6, 0.4});
    CHECK_FALSE(ok.vote_error);
    CHECK(ok.holds);

    const L1GapVerdict tie = check_l1_gap(std::vector<double>{0.5, 0.5},
                                          std::vector<double>{0.6, 0.4});
    CHECK(tie.vote_error);
    CHECK(tie.l1 == doctest::Approx(0.2));
    CHECK(tie.holds);

    CHECK_THROWS_AS(check_l1_gap(std::vector<double>{0.5, 0.5},
                                 std::vector<double>{0.5, 0.5}),
                    Error);
    CHECK_THROWS_AS(check_l1_gap(std::vector<double>{0.4, 0.3, 0.3},
                                 std::vector<double>{0.5, 0.2, 0.3}),
                    Error);
}

TEST_CASE("l1 lemma holds on random plurality-error instances") {
    RngStream rng(37);
    int seen = 0;
    while (seen < 20000) {
        const int K = 2 + static_cast<int>(rng.below(5));
        std::vector<double> ones(static_cast<std::size_t>(K), 1.0);
        std::vector<double> p = rng.dirichlet(ones);
        std::sort(p.begin(), p.end(), std::greater<>());
        if (p[0] - p[1] < 1e-9) {
            continue;
        }
        const std::vector<double> p_hat = rng.dirichlet(ones);
        const L1GapVerdict v = check_l1_gap(p_hat, p);
        if (!v.vote_error) {
            continue;
        }
        ++seen;
        REQUIRE(v.holds);
    }
}

TEST_CASE("copy mixture: exact covariance by enumeration at K=2, N=2") {
    // agents copy a shared draw with probability lambda, else draw fresh;
    // enumerate (copy_a, copy_b, shared, fresh_a, fresh_b) exactly
    const double p1 = 0.7;
    for (double lambda : {0.0, 0.3, 0.6, 1.0}) {
        double e_joint = 0.0, e_single = 0.0;
        for (int ca = 0; ca < 2; ++ca) {
            for (int cb = 0; cb < 2; ++cb) {
                for (int z = 0; z < 2; ++z) {
                    for (int fa = 0; fa < 2; ++fa) {
                        for (int fb = 0; fb < 2; ++fb) {
                            const double prob = (ca ? lambda : 1 - lambda) *
                                                (cb ? lambda : 1 - lambda) *
                                                (z ? p1 : 1 - p1) * (fa ? p1 : 1 - p1) *
                                                (fb ? p1 : 1 - p1);
                            const int ya = ca ? z : fa;
                            const int yb = cb ? z : fb;
                            e_joint += prob * ya * yb;
                            e_single += prob * ya;
                        }
                    }
                }
            }
        }
        const double cov = e_joint - e_single * e_single;
        CHECK(cov == doctest::Approx(lambda * lambda * p1 * (1 - p1)).epsilon(1e-12));
    }
}

TEST_CASE("copy mixture preserves marginals and hits rho = lambda^2") {
    const std::vector<double> p = {0.6, 0.3, 0.1};
    RngStream rng(41);
    const int R = 20000;

    for (double lambda : {0.0, 0.6}) {
        std::vector<std::vector<Label>> panels(R);
        std::vector<int> tally(3, 0);
        for (auto& row : panels) {
            row = copy_mixture_sample(p, lambda, 4, rng);
            for (Label y : row) {
                ++tally[y - 1];
            }
        }
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(tally[k] / (4.0 * R) - p[k]) < 0.01);
        }
        const CorrelationEstimate rho = estimate_correlation(panels, 3);
        CHECK(std::abs(rho.clamped - lambda * lambda) < 0.05);
    }

    RngStream all_copy(43);
    const auto labels = copy_mixture_sample(p, 1.0, 6, all_copy);
    CHECK(std::all_of(labels.begin(), labels.end(),
                      [&](Label y) { return y == labels[0]; }));
}

TEST_CASE("correlation estimator recognizes identical columns") {
    RngStream rng(47);
    std::vector<std::vector<Label>> panels(5000);
    for (auto& row : panels) {
        row.assign(4, static_cast<Label>(rng.below(3)) + 1);
    }
    const CorrelationEstimate rho = estimate_correlation(panels, 3);
    CHECK(rho.clamped == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("correlation estimator input validation") {
    CHECK_THROWS_AS(estimate_correlation({{1, 2}}, 2), Error);
    CHECK_THROWS_AS(estimate_correlation({{1}, {2}}, 2), Error);
    // constant panels leave no label with interior frequency
    CHECK_THROWS_AS(estimate_correlation({{1, 1}, {1, 1}}, 2), Error);
}
