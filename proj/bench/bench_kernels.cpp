// Wall-clock comparison of the OpenMP grid kernels with their serial twins,
// plus the minimal atlas. Usage: bench_kernels [grid_side] [bounces]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "spt/parallel.hpp"
#include "spt/spt.hpp"

using namespace spt;

namespace {

template <class F>
double seconds(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const std::vector<GridValue>& a, const std::vector<GridValue>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k].omega != b[k].omega || a[k].failure != b[k].failure) return false;
    return true;
}

} // namespace

int main(int argc, char** argv) {
    const std::size_t side = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 8;
    const std::size_t bounces = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 20000;
    Ellipsoid ell(Vec{0.13, 0.8, 1.0});
    std::vector<Vec> lams;
    for (const CausticType& t : CausticType::all(2))
        for (const Vec& l : caustic_grid(t, ell, side)) lams.push_back(l);

    std::printf("threads %d, %zu caustic parameters, %zu bounces\n", worker_threads(), lams.size(), bounces);
    std::printf("%-18s %10s %10s %8s %s\n", "kernel", "serial s", "omp s", "speedup", "identical");

    std::vector<GridValue> a, b;
    double ts = seconds([&] { a = frequency_grid_serial(lams, ell); });
    double tp = seconds([&] { b = frequency_grid(lams, ell); });
    std::printf("%-18s %10.3f %10.3f %8.2f %s\n", "frequency_grid", ts, tp, ts / tp, same(a, b) ? "yes" : "NO");

    ts = seconds([&] { a = empirical_grid_serial(lams, ell, bounces); });
    tp = seconds([&] { b = empirical_grid(lams, ell, bounces); });
    std::printf("%-18s %10.3f %10.3f %8.2f %s\n", "empirical_grid", ts, tp, ts / tp, same(a, b) ? "yes" : "NO");

    std::vector<AtlasEntry> sa, pa;
    ts = seconds([&] { sa = minimal_atlas_serial(); });
    tp = seconds([&] { pa = minimal_atlas(); });
    bool ok = sa.size() == pa.size();
    for (std::size_t k = 0; ok && k < sa.size(); ++k) ok = sa[k].ok() == pa[k].ok();
    std::printf("%-18s %10.3f %10.3f %8.2f %s\n", "minimal_atlas", ts, tp, ts / tp, ok ? "yes" : "NO");
    return 0;
}
