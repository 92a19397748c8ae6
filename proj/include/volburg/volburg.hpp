#pragma once

#include "volburg/burg.hpp"
#include "volburg/error.hpp"
#include "volburg/forecast.hpp"
#include "volburg/fractal.hpp"
#include "volburg/garch.hpp"
#include "volburg/memspec.hpp"
#include "volburg/pipeline.hpp"
#include "volburg/series.hpp"
#include "volburg/synth.hpp"
