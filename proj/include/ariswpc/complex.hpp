#pragma once

namespace ariswpc {

// Plain complex scalar shared by the channel model and the arithmetic
// kernels. Layout is two contiguous doubles (re, im) so kernel code may
// reinterpret arrays of Complex as interleaved double pairs.
struct Complex {
    double re = 0.0;
    double im = 0.0;
};

}  // namespace ariswpc
