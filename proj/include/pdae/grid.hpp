#pragma once

namespace pdae {

// Uniform interior grid: x_i = x_lo + i*h for i = 1..N, h = (x_hi - x_lo)/(N+1).
// delta weights the first-order difference stencil (1/2 = central).
struct GridSpec {
    int N = 0;
    double h = 0.0;
    double delta = 0.5;
};

} // namespace pdae
