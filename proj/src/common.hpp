#ifndef EGLAB_COMMON_HPP
#define EGLAB_COMMON_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace eglab {

using cdouble = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Global worker count for parallel_for; 0 = hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Chunked parallel map over [0, n). Work items must write to disjoint state;
// results are then independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

struct GridMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

inline double sqr(double x) { return x * x; }

std::string format_g17(double x);

} // namespace eglab

#endif
