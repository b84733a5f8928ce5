// Benchmark: the OpenMP table-scan associativity kernel against the serial
// table scan and the element-by-element serial reference, on derived n-ary
// sum groups over Z_m.  All three must agree on the verdict; the reference
// path is the correctness baseline.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "polyprod/exemplars.hpp"

using namespace polyprod;

namespace {

double run_once(const AlgebraicStructure& s, CheckPolicy::Engine engine, bool& passed,
                std::uint64_t& tuples) {
    CheckPolicy policy;
    policy.engine = engine;
    policy.exhaustive_budget = 500'000'000;
    auto t0 = std::chrono::steady_clock::now();
    auto result = check_total_associativity(s, policy);
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                  .count();
    passed = result.passed;
    tuples = result.evidence.count;
    return ms;
}

void bench(std::int64_t modulus, int arity) {
    auto s = derived_group_zm(modulus, arity);
    bool ok_ref = false, ok_serial = false, ok_parallel = false;
    std::uint64_t tuples = 0;
    double ref_ms = run_once(s, CheckPolicy::Engine::SerialReference, ok_ref, tuples);
    double par_ms = run_once(s, CheckPolicy::Engine::TableParallel, ok_parallel, tuples);
    double auto_ms = run_once(s, CheckPolicy::Engine::Auto, ok_serial, tuples);
    const char* agree = (ok_ref == ok_parallel && ok_ref == ok_serial) ? "agree" : "DISAGREE";
    std::printf("Z_%-3lld %d-ary  %12llu tuples  reference %9.1f ms  parallel %8.1f ms  "
                "auto %8.1f ms  speedup %5.1fx  verdicts %s\n",
                static_cast<long long>(modulus), arity,
                static_cast<unsigned long long>(tuples), ref_ms, par_ms, auto_ms,
                par_ms > 0 ? ref_ms / par_ms : 0.0, agree);
}

}  // namespace

int main(int argc, char** argv) {
    std::printf("total associativity scan: all (2n-1)-polyads, every inner placement\n");
    if (argc == 3) {
        bench(std::atoll(argv[1]), std::atoi(argv[2]));
        return 0;
    }
    bench(5, 3);
    bench(13, 3);
    bench(23, 3);
    bench(7, 4);
    bench(11, 4);
    return 0;
}
