#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lensspec
{

/// Worker count from LENSSPEC_JOBS, else 1.
inline std::size_t default_jobs()
{
    if (const char *env = std::getenv("LENSSPEC_JOBS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<std::size_t>(v);
            }
        } catch (const std::exception &) {
        }
    }
    return 1;
}

/// out[i] = fn(i) for i < count, on up to `jobs` threads. Results land by index,
/// so the output never depends on scheduling. The first exception is rethrown.
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t count, std::size_t jobs, Fn &&fn)
{
    std::vector<Result> out(count);
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = fn(i);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = count;
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(jobs, count); ++t) {
        pool.emplace_back(worker);
    }
    for (auto &th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

} // namespace lensspec
