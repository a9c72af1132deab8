#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace inradius {

/// Worker count used by the data-parallel kernels. Results never depend on it.
void set_thread_count(int n);
int thread_count();

/// Calls body(begin, end) on disjoint contiguous chunks covering [0, n).
void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body);

/// Sum of term(i) for i in [0, n). Terms are grouped in fixed-size blocks and the
/// block sums are combined pairwise, so the result is bit-identical for any thread count.
double deterministic_sum(std::ptrdiff_t n, const std::function<double(std::ptrdiff_t)>& term);
double deterministic_sum(std::span<const double> values);

}  // namespace inradius
