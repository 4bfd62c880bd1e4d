#pragma once
//
// Core library. experiments.hpp (drivers, quad-precision checks) is not
// included here since it additionally needs Boost.Multiprecision and
// libquadmath.
//

#include "bounds.hpp"
#include "error.hpp"
#include "expression.hpp"
#include "expsum.hpp"
#include "fourier.hpp"
#include "jacobi_svd.hpp"
#include "pathology.hpp"
#include "poisson.hpp"
#include "projections.hpp"
#include "svd_engine.hpp"
#include "test_functions.hpp"
