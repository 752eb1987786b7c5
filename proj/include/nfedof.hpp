#pragma once

#include "nfedof/capacity.hpp"
#include "nfedof/channel.hpp"
#include "nfedof/closedform.hpp"
#include "nfedof/coupling.hpp"
#include "nfedof/edof.hpp"
#include "nfedof/errors.hpp"
#include "nfedof/geometry.hpp"
#include "nfedof/greens.hpp"
#include "nfedof/numerics.hpp"
#include "nfedof/workbench.hpp"
