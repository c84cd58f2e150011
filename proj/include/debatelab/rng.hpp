#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "debatelab/errors.hpp"

namespace debatelab {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based splitmix64 stream with key-derived substreams.
///
/// A stream is identified by a 64-bit key; draw i is mix64(key + i*phi).
/// child(salt) derives a fresh key from (key, salt), so substreams keyed by
/// (replicate, round, agent, purpose) are independent of call order and of
/// how work is distributed across threads. Platform-independent: only
/// integer mixing and explicit float conversions are used for the core
/// draws. Identifier recorded in run metadata: "splitmix64-kdf/1".
class RngStream {
  public:
    static constexpr const char* kGeneratorId = "splitmix64-kdf/1";

    explicit RngStream(std::uint64_t key) : key_(key) {}

    RngStream child(std::uint64_t salt) const noexcept {
        return RngStream(mix64(key_ ^ mix64(salt + 0x632be59bd9b4e019ULL)));
    }
    RngStream child(std::uint64_t a, std::uint64_t b) const noexcept {
        return child(a).child(b);
    }
    RngStream child(std::uint64_t a, std::uint64_t b, std::uint64_t c) const noexcept {
        return child(a).child(b).child(c);
    }

    std::uint64_t next_u64() noexcept {
        return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; safe as a log/pow argument.
    double next_double_pos() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n); rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) noexcept {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) noexcept { return next_double() < p; }

    /// Standard normal via Box-Muller (one value per call).
    double normal() noexcept {
        const double u1 = next_double_pos();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang; boost trick for shape < 1.
    double gamma(double shape) {
        if (!(shape > 0.0)) {
            throw Error("gamma shape must be positive");
        }
        if (shape < 1.0) {
            const double u = next_double_pos();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = next_double_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) {
                return d * v;
            }
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
                return d * v;
            }
        }
    }

    /// Dirichlet(alpha) point on the simplex.
    std::vector<double> dirichlet(std::span<const double> alpha) {
        std::vector<double> draw(alpha.size());
        for (;;) {
            double total = 0.0;
            for (std::size_t k = 0; k < alpha.size(); ++k) {
                draw[k] = gamma(alpha[k]);
                total += draw[k];
            }
            if (total > 0.0) {
                for (double& v : draw) {
                    v /= total;
                }
                return draw;
            }
            // all gammas underflowed to zero; redraw
        }
    }

    /// Index in [0, weights.size()) with probability proportional to weight.
    int categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) {
            total += w;
        }
        if (!(total > 0.0)) {
            throw Error("categorical weights must have positive total");
        }
        const double u = next_double() * total;
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
            acc += weights[k];
            if (u < acc) {
                return static_cast<int>(k);
            }
        }
        return static_cast<int>(weights.size()) - 1;
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace debatelab
