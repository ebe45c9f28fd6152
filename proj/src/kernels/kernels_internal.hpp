#pragma once

#include "dfock/kernels.hpp"

namespace dfock::kernels::detail {

const Table& scalar_impl() noexcept;
#if defined(DFOCK_HAVE_AVX2)
const Table& avx2_impl() noexcept;
#endif

}  // namespace dfock::kernels::detail
