#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mvm {

// Derives an independent substream seed from a base seed and a stream index
// (splitmix64 finalizer). Used wherever work is split into seeded blocks so
// that results do not depend on the number of workers.
std::uint64_t substreamSeed(std::uint64_t seed, std::uint64_t stream);

// Worker count: hardware concurrency, capped by the MVM_THREADS environment
// variable when set.
int workerCount();

// Runs f(i) for every i in [0, count). Iterations must be independent; they
// are distributed over workerCount() threads.
void parallelFor(std::size_t count, const std::function<void(std::size_t)>& f);

// Sums a vector by pairwise tree reduction. The reduction order is fixed by
// the slot layout, so the result is bit-stable no matter how the slots were
// filled.
double treeSum(std::vector<double> values);

}  // namespace mvm
