#pragma once

// Umbrella include for the whole library.

#include "cul/adam.hpp"
#include "cul/checkpoint.hpp"
#include "cul/decoder.hpp"
#include "cul/eigen.hpp"
#include "cul/encoder.hpp"
#include "cul/error.hpp"
#include "cul/generators.hpp"
#include "cul/gradcheck.hpp"
#include "cul/graph.hpp"
#include "cul/loss.hpp"
#include "cul/matrix.hpp"
#include "cul/metrics.hpp"
#include "cul/model.hpp"
#include "cul/rng.hpp"
#include "cul/training.hpp"
#include "cul/version.hpp"
