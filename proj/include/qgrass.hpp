#pragma once

#include "qgrass/aep.hpp"
#include "qgrass/entropy.hpp"
#include "qgrass/exact.hpp"
#include "qgrass/gf.hpp"
#include "qgrass/grassproc.hpp"
#include "qgrass/maxent.hpp"
#include "qgrass/qcomb.hpp"
#include "qgrass/qdist.hpp"
#include "qgrass/rng.hpp"
