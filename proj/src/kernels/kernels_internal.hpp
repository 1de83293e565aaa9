#pragma once

#include "opnorm/kernels.hpp"

namespace opnorm::kernels {

namespace scalar {
const Table& table() noexcept;
}

#if defined(OPNORM_HAVE_AVX2)
namespace avx2 {
const Table& table() noexcept;
}
#endif

#if defined(OPNORM_HAVE_NEON)
namespace neon {
const Table& table() noexcept;
}
#endif

}  // namespace opnorm::kernels
