#pragma once

#include "spca/kernels.hpp"

namespace spca::kernels::detail {

extern const KernelTable kScalarTable;

#if defined(SPCA_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace spca::kernels::detail
