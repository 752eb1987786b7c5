#pragma once

#include "nfedof/workbench/config.hpp"
#include "nfedof/workbench/csv.hpp"
#include "nfedof/workbench/presets.hpp"
#include "nfedof/workbench/spec.hpp"
#include "nfedof/workbench/sweep.hpp"
