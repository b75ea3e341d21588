#pragma once

#include <cstdint>
#include <random>

namespace fortsim {

// Deterministic random stream keyed by (master seed, stream index).
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard; the distributions are Boost.Random implementations compiled into
// this library, so a given (seed, index) yields the same draws on every
// platform and standard library.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t index() const { return index_; }

    // Independent stream nested under this one.
    RngStream child(std::uint64_t index) const;

    double uniform01();
    double uniform(double lo, double hi);
    double normal(double mean, double sd);
    // Lorentzian centred at 0 with half-width `scale`.
    double cauchy(double scale);
    std::uint64_t poisson(double mean);
    std::uint64_t binomial(std::uint64_t trials, double p);

    std::uint64_t next_u64() { return engine_(); }

  private:
    std::uint64_t seed_;
    std::uint64_t index_;
    std::mt19937_64 engine_;
};

// SplitMix64 finaliser used to derive engine keys.
std::uint64_t mix64(std::uint64_t x);

}  // namespace fortsim
