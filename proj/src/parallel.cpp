#include "torsion/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace torsion {

unsigned default_workers()
{
    if (const char* env = std::getenv("TORSION_BOUND_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v >= 1)
                return static_cast<unsigned>(v);
        } catch (const std::exception&) {
            // fall through to hardware default
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t, std::size_t)>& body)
{
    if (count == 0)
        return;
    if (workers == 0)
        workers = default_workers();
    const std::size_t chunks = std::min<std::size_t>(workers, count);
    if (chunks <= 1) {
        body(0, count);
        return;
    }

    std::vector<std::thread> threads;
    threads.reserve(chunks);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t per = count / chunks;
    const std::size_t extra = count % chunks;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t end = begin + per + (c < extra ? 1 : 0);
        threads.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : threads)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace torsion
