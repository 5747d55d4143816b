#include "rushsim/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rushsim {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, Stream stream, std::uint64_t sub_id) {
  const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  return std::seed_seq{lo(seed), hi(seed), static_cast<std::uint32_t>(stream), lo(sub_id), hi(sub_id)};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, Stream stream, std::uint64_t sub_id) {
  auto seq = make_seed_seq(seed, stream, sub_id);
  gen_.seed(seq);
}

double RngStream::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("uniform: invalid interval [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + ")");
  }
  if (lo == hi) {
    return lo;
  }
  const double v = lo + (hi - lo) * uniform01();
  // rounding can land exactly on hi for tiny intervals
  return v < hi ? v : lo;
}

std::size_t RngStream::index(std::size_t n) {
  if (n == 0) {
    throw std::invalid_argument("index: empty range");
  }
  const std::uint64_t range = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t v;
  do {
    v = gen_();
  } while (v >= limit);
  return static_cast<std::size_t>(v % range);
}

}  // namespace rushsim
