#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace qpc {

// Fixed-shape pairwise tree sum. The result depends only on the contents of
// v, never on thread count or chunking, so quadrature values reproduce
// bit-for-bit.
double pairwise_sum(std::span<const double> v);

// Exact sum of a list of doubles via a Shewchuk-style expansion, rounded
// once at the end. Sums whose exact value is zero return exactly 0.0.
double exact_sum(std::span<const double> v);

// Static block partition of [0, n) over `threads` workers. fn(begin, end) is
// called on disjoint ranges; workers must write only to their own slots.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

// Thread count resolution: explicit override > QPC_THREADS > hardware.
unsigned resolve_threads(unsigned override_count = 0);

} // namespace qpc
