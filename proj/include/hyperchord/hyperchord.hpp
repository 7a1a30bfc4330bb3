#pragma once

#define HYPERCHORD_VERSION "0.1.0"

#include "hyperchord/charfun.hpp"
#include "hyperchord/chord.hpp"
#include "hyperchord/errors.hpp"
#include "hyperchord/geometry.hpp"
#include "hyperchord/inference.hpp"
#include "hyperchord/quadrature.hpp"
#include "hyperchord/rng.hpp"
#include "hyperchord/sampling.hpp"
#include "hyperchord/specfun.hpp"
