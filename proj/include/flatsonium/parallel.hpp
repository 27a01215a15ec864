#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace flatsonium {

/// Worker count from FLATSONIUM_THREADS; 0, unset or garbage means hardware concurrency.
inline std::size_t worker_count() {
    std::size_t requested = 0;
    if (const char* env = std::getenv("FLATSONIUM_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) requested = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
    }
    if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
    return requested;
}

/// Evaluates fn(i) for i in [0, n) and returns the results in index order.
/// Each slot is written by exactly one worker, so the output does not depend on
/// scheduling. If several indices throw, the lowest-index exception is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn, std::size_t threads = worker_count()) {
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
    if (threads == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    }

    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace flatsonium
