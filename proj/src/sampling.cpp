#include "lorentz/sampling.hpp"

#include <algorithm>
#include <numeric>

namespace lorentz {

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t k) {
  // splitmix64 finaliser over the pair
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

long uniform_int(Rng &rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

Scalar random_rational(Rng &rng, long max_num, long max_den) {
  return Scalar::ratio(uniform_int(rng, -max_num, max_num), uniform_int(rng, 1, max_den));
}

Sequence random_finite(Rng &rng, std::size_t max_len, long max_num, long max_den) {
  const auto len = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<long>(max_len)));
  std::vector<Scalar> head;
  head.reserve(len);
  for (std::size_t i = 0; i < len; ++i)
    head.push_back(random_rational(rng, max_num, max_den));
  return Sequence(std::move(head));
}

std::vector<std::size_t> random_permutation(Rng &rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

std::vector<int> random_signs(Rng &rng, std::size_t n) {
  std::vector<int> signs(n);
  for (auto &s : signs)
    s = uniform_int(rng, 0, 1) == 0 ? -1 : 1;
  return signs;
}

} // namespace lorentz
