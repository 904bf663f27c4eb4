#pragma once

// Umbrella header.

#include "sscl/boundary_lift.hpp"
#include "sscl/config.hpp"
#include "sscl/experiments.hpp"
#include "sscl/flux.hpp"
#include "sscl/grid.hpp"
#include "sscl/kinetic.hpp"
#include "sscl/noise.hpp"
#include "sscl/solver.hpp"
#include "sscl/stats.hpp"
#include "sscl/version.hpp"
