#pragma once

namespace dldl {

// Selects the OpenMP kernel or the serial reference it is tested against.
// Both produce bit-identical results: parallel paths only split independent
// work and reduce in a fixed order.
enum class Execution { kSerial, kParallel };

int hardware_threads();

}  // namespace dldl
