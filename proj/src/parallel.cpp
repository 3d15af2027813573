#include "matchdp/parallel.hpp"

#include <atomic>

namespace matchdp {

namespace {
std::atomic<unsigned> g_workers{std::max(1u, std::thread::hardware_concurrency())};
}

void set_worker_count(unsigned n) { g_workers = std::max(1u, n); }

unsigned worker_count() { return g_workers; }

}  // namespace matchdp
