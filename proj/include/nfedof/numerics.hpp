#pragma once

#include "nfedof/errors.hpp"
#include "nfedof/numerics/eigen_jacobi.hpp"
#include "nfedof/numerics/matrix.hpp"
#include "nfedof/numerics/parallel.hpp"
#include "nfedof/numerics/quadrature.hpp"
#include "nfedof/numerics/sampler.hpp"
#include "nfedof/numerics/special.hpp"
