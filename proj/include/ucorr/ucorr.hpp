#pragma once

// Umbrella header.

#include "clinalg.hpp"
#include "correlator_matrix.hpp"
#include "correlators.hpp"
#include "errors.hpp"
#include "hciz.hpp"
#include "instances.hpp"
#include "log_complex.hpp"
#include "matrix.hpp"
#include "monte_carlo.hpp"
#include "numeric.hpp"
#include "oracles.hpp"
#include "parallel.hpp"
#include "precision.hpp"
#include "resolvent.hpp"
#include "schur.hpp"
#include "spectra.hpp"
#include "verify.hpp"
