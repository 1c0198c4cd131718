#include "freelevy/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace freelevy {
namespace {

std::atomic<unsigned> g_workers{0};

unsigned default_workers() {
    if (const char* env = std::getenv("FREELEVY_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

unsigned worker_count() {
    const unsigned w = g_workers.load();
    return w == 0 ? default_workers() : w;
}

void set_worker_count(unsigned n) { g_workers = n; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> error_index(workers, n);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    error_index[w] = i;
                    return;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    std::size_t best = n, which = workers;
    for (std::size_t w = 0; w < workers; ++w)
        if (errors[w] && error_index[w] < best) {
            best = error_index[w];
            which = w;
        }
    if (which < workers) std::rethrow_exception(errors[which]);
}

}  // namespace freelevy
