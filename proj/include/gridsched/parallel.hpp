#pragma once

namespace gridsched {

/// Selects between the OpenMP kernel and its serial reference. Both
/// produce identical output; the serial path is kept for tests and
/// benchmarks.
enum class Execution { serial, parallel };

/// Worker cap from GRIDSCHED_THREADS, or the OpenMP default when unset.
int configured_threads();

/// Applies configured_threads() to the OpenMP runtime.
void apply_thread_limit();

}  // namespace gridsched
