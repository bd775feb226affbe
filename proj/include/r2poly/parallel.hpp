#ifndef R2POLY_PARALLEL_HPP
#define R2POLY_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace r2poly {

/// Runs fn(0..tasks-1) on up to `threads` workers. Tasks are claimed from a
/// shared counter; the first exception thrown is rethrown on the caller.
template <class Fn>
void parallel_for(std::size_t tasks, std::size_t threads, Fn&& fn)
{
    threads = std::max<std::size_t>(1, std::min(threads, tasks));
    if (threads == 1) {
        for (std::size_t t = 0; t < tasks; ++t)
            fn(t);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t t = next++; t < tasks; t = next++) {
                try {
                    fn(t);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace r2poly

#endif // R2POLY_PARALLEL_HPP
