#pragma once

// Convenience include for the whole library.

#include "mxsketch/benchmark.hpp"
#include "mxsketch/datagen.hpp"
#include "mxsketch/equation.hpp"
#include "mxsketch/linalg.hpp"
#include "mxsketch/matrix_market.hpp"
#include "mxsketch/metrics.hpp"
#include "mxsketch/rng.hpp"
#include "mxsketch/samplers.hpp"
#include "mxsketch/serialization.hpp"
#include "mxsketch/solve.hpp"
#include "mxsketch/steps.hpp"
#include "mxsketch/theory.hpp"
#include "mxsketch/types.hpp"
#include "mxsketch/verify.hpp"
