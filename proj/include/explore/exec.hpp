#pragma once

namespace explore {

/// Execution mode for the data-parallel kernels. Serial is the reference
/// implementation; Parallel runs the same computation with OpenMP and must
/// produce identical results (integer outputs exactly, floating-point
/// reductions within summation-order tolerance).
enum class ExecMode { Serial, Parallel };

}  // namespace explore
