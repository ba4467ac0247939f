#pragma once

#include "rbe/linalg/kernels.hpp"

namespace rbe::kernels::detail {

extern const KernelTable kScalarTable;

#if defined(RBE_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Table;
#endif

}  // namespace rbe::kernels::detail
