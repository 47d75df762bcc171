#ifndef LORENTZ_SAMPLING_HPP
#define LORENTZ_SAMPLING_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "lorentz/sequence.hpp"

namespace lorentz {

using Rng = std::mt19937_64;

/// Seed for trial `k` of a battery rooted at `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t k);

/// Uniform integer in [lo, hi].
long uniform_int(Rng &rng, long lo, long hi);

/// Rational num/den with |num| <= max_num and 1 <= den <= max_den.
Scalar random_rational(Rng &rng, long max_num, long max_den);

/// Finitely supported sequence with head length in [1, max_len]. Small
/// numerators make ties and zeros common, which is where the rearrangement
/// calculus is most delicate.
Sequence random_finite(Rng &rng, std::size_t max_len, long max_num = 6, long max_den = 4);

/// Uniformly random permutation of {0..n-1} (the form permute_and_flip takes)
/// and a sign pattern.
std::vector<std::size_t> random_permutation(Rng &rng, std::size_t n);
std::vector<int> random_signs(Rng &rng, std::size_t n);

} // namespace lorentz

#endif // LORENTZ_SAMPLING_HPP
