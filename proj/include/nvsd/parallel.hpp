#pragma once

namespace nvsd {

// Thread count for data-parallel scans: min(omp_get_max_threads, NVSD_THREADS).
// Returns 1 when built without OpenMP. All parallel kernels in this project
// write to disjoint slots or reduce integers, so results never depend on the
// value returned here.
int max_threads();

}  // namespace nvsd
