#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace krylov {

enum class Exec { Serial, Parallel };

// Runs fn(i) for i in [0, n). The serial path is the reference; the
// parallel path writes the same slots, so results are bit-identical.
// The first exception (lowest index) is rethrown after the loop.
template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

void set_thread_count(int n);
int max_threads();

}  // namespace krylov
