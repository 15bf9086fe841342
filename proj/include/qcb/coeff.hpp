#pragma once

#include "qcb/integer.hpp"
#include "qcb/laurent.hpp"
#include "qcb/rational.hpp"

namespace qcb {

// [n] = (v^n - v^-n) / (v - v^-1); [-n] = -[n].
LaurentPoly quantum_int(int n);
// [n]! for n >= 0.
LaurentPoly quantum_factorial(int n);
// Gaussian binomial; for n < 0 via [n, k] = (-1)^k [k - n - 1, k].
LaurentPoly quantum_binomial(int n, int k);

enum class Lattice { A, Zvinv, vinvZvinv, Nvv, Nvinv };

bool lattice_test(const RationalFn& x, Lattice kind, int trunc = 0);

// Default truncation order for the series test: twice the v-degree span.
int default_trunc(const RationalFn& x);

// x in v^-1 Z[[v^-1]] intersected with Q(v), checked to order `trunc`.
bool in_vinvA(const RationalFn& x, int trunc = 0);

}  // namespace qcb
