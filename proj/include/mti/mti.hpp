#pragma once

// Umbrella header for the mti library.

#include "mti/analysis.hpp"
#include "mti/channel.hpp"
#include "mti/edfsa.hpp"
#include "mti/experiment.hpp"
#include "mti/inventory.hpp"
#include "mti/ismti.hpp"
#include "mti/result.hpp"
#include "mti/rng.hpp"
#include "mti/ssmti.hpp"
#include "mti/tag.hpp"
#include "mti/timing.hpp"
