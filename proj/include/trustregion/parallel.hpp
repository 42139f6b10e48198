#pragma once

namespace trustregion {

/// Execution policy for kernels that ship both a serial reference path and
/// an OpenMP path. Both paths produce identical results.
enum class Exec { serial, parallel };

/// Sets the OpenMP thread count used by Exec::parallel kernels (<= 0 keeps the default).
void set_parallel_jobs(int jobs);
int parallel_jobs();

} // namespace trustregion
