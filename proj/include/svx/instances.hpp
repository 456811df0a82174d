#pragma once

#include <cstdint>

#include "svx/distributed.hpp"
#include "svx/model.hpp"
#include "svx/rng.hpp"

namespace svx {

// Random non-degenerate die: normalized exponentials mixed with uniform so
// every entry is at least floor/|C|.
Distribution random_die(SplitMix64& rng, int alphabet, double floor = 0.1);

// |S| random non-degenerate dice over |C| symbols.
SourceSpec random_spec(SplitMix64& rng, int alphabet, int num_dice,
                       double floor = 0.1);

// Random non-degenerate spec whose dice affinely span the probability
// simplex (trivial nullspace), by rejection.
SourceSpec random_spanning_spec(SplitMix64& rng, int alphabet, int num_dice);

// Random joint matrix with strictly positive entries.
JointMatrix random_joint(SplitMix64& rng, int a_size, int b_size,
                         double floor = 0.05);

// Doubly symmetric binary source: uniform marginals, Pr[A != B] = eps.
JointMatrix dsbs(double eps);

// Tensor square p2((a,a'),(b,b')) = p(ab) p(a'b').
JointMatrix tensor_square(const JointMatrix& joint);

// Applies independent random stochastic maps to both marginals.
JointMatrix apply_random_channels(SplitMix64& rng, const JointMatrix& joint,
                                  int a_out, int b_out);

}  // namespace svx
