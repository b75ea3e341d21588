#include "fortsim/rng.hpp"

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/cauchy_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_real_distribution.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fortsim {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(index ^ 0x5851f42d4c957f2dULL));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t index)
    : seed_(seed), index_(index), engine_(stream_key(seed, index)) {}

RngStream RngStream::child(std::uint64_t index) const {
    return RngStream(stream_key(seed_, index_), index);
}

double RngStream::uniform01() {
    return boost::random::uniform_01<double>{}(engine_);
}

double RngStream::uniform(double lo, double hi) {
    if (lo == hi) return lo;
    return boost::random::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RngStream::normal(double mean, double sd) {
    if (sd == 0.0) return mean;
    return boost::random::normal_distribution<double>(mean, sd)(engine_);
}

double RngStream::cauchy(double scale) {
    if (scale == 0.0) return 0.0;
    return boost::random::cauchy_distribution<double>(0.0, scale)(engine_);
}

std::uint64_t RngStream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("RngStream::poisson: mean must be finite and >= 0");
    }
    if (mean == 0.0) return 0;
    const auto k = boost::random::poisson_distribution<long long, double>(mean)(engine_);
    return static_cast<std::uint64_t>(k);
}

std::uint64_t RngStream::binomial(std::uint64_t trials, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("RngStream::binomial: p must be in [0, 1]");
    }
    if (trials == 0 || p == 0.0) return 0;
    if (p == 1.0) return trials;
    if (trials > static_cast<std::uint64_t>(std::numeric_limits<long long>::max())) {
        throw std::invalid_argument("RngStream::binomial: too many trials");
    }
    const auto k = boost::random::binomial_distribution<long long, double>(
        static_cast<long long>(trials), p)(engine_);
    return static_cast<std::uint64_t>(k);
}

}  // namespace fortsim
