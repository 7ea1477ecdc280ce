#pragma once

namespace twistlab {

// Process-wide worker count used by every OpenMP kernel in the library.
// 0 (the default) means "use the OpenMP runtime default".  All kernels are
// written so that their output is bit-identical for any worker count; the
// knob only affects wall time.
int worker_count();
void set_worker_count(int n);

} // namespace twistlab
