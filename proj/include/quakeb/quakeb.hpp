#pragma once

// Umbrella header for the full toolkit.

#include "quakeb/catalog.hpp"
#include "quakeb/error.hpp"
#include "quakeb/eval.hpp"
#include "quakeb/mlp.hpp"
#include "quakeb/rng.hpp"
#include "quakeb/seismicity.hpp"
#include "quakeb/synthcat.hpp"
#include "quakeb/time.hpp"
#include "quakeb/util.hpp"
