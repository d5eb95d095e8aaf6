#pragma once

namespace irm {

// Kernels with an OpenMP path keep a serial path that produces identical
// results; tests compare the two and bench/ times them.
enum class Execution { kSerial, kOpenMp };

}  // namespace irm
