#ifndef SPHWHITTLE_SPHWHITTLE_HPP
#define SPHWHITTLE_SPHWHITTLE_HPP

#include "sphwhittle/asymptotics.hpp"
#include "sphwhittle/error.hpp"
#include "sphwhittle/minimize.hpp"
#include "sphwhittle/montecarlo.hpp"
#include "sphwhittle/rng.hpp"
#include "sphwhittle/sampling.hpp"
#include "sphwhittle/spectrum.hpp"
#include "sphwhittle/stats.hpp"
#include "sphwhittle/summation.hpp"
#include "sphwhittle/whittle.hpp"

#endif  // SPHWHITTLE_SPHWHITTLE_HPP
