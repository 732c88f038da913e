#pragma once

#include "ccwsim/errors.hpp"
#include "ccwsim/grid.hpp"
#include "ccwsim/io.hpp"
#include "ccwsim/matcher.hpp"
#include "ccwsim/metrics.hpp"
#include "ccwsim/rng.hpp"
#include "ccwsim/simulator.hpp"
#include "ccwsim/wavelet.hpp"
