#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <thread>
#include <vector>

namespace voxtdp {

// Run `body(j, state)` for j in [0, count) across up to `threads` workers.
// Each worker owns one state created by `make_state`; outputs must go to
// preallocated per-j slots so results are independent of scheduling.
template <typename MakeState, typename Body>
void parallel_for(int threads, std::uint32_t count, MakeState make_state, Body body) {
    if (threads < 1) threads = 1;
    const unsigned workers = std::min<unsigned>(static_cast<unsigned>(threads), count == 0 ? 1 : count);
    if (workers <= 1) {
        auto state = make_state(0u);
        for (std::uint32_t j = 0; j < count; ++j) body(j, *state);
        return;
    }
    std::atomic<std::uint32_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            auto state = make_state(w);
            for (;;) {
                std::uint32_t j = next.fetch_add(1);
                if (j >= count || failed.load()) break;
                try {
                    body(j, *state);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    break;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

inline int available_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace voxtdp
