#pragma once

namespace ddrive {

// Execution policy for the data-parallel kernels (swarm evaluation, Monte
// Carlo runs). The serial path is the reference implementation; the parallel
// path must produce bit-identical results for any thread count, which the
// tests enforce.
struct ExecPolicy {
    bool parallel = true;
    int jobs = 0;  // thread cap; 0 = OpenMP default

    static ExecPolicy serial() { return {false, 1}; }
};

}  // namespace ddrive
