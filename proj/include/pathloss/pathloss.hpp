#pragma once

#include "pathloss/channel.hpp"
#include "pathloss/coefficients.hpp"
#include "pathloss/density.hpp"
#include "pathloss/error.hpp"
#include "pathloss/integrate.hpp"
#include "pathloss/montecarlo.hpp"
#include "pathloss/random.hpp"
#include "pathloss/spatial.hpp"
