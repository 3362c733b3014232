#pragma once

#include "semcomm/kernels.hpp"

namespace semcomm::kernels::detail {

extern const KernelTable kScalarTable;
#if defined(SEMCOMM_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif

}  // namespace semcomm::kernels::detail
