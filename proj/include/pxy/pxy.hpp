#pragma once

// Umbrella header.

#include "pxy/bootstrap.hpp"
#include "pxy/core.hpp"
#include "pxy/csv.hpp"
#include "pxy/error.hpp"
#include "pxy/estimators.hpp"
#include "pxy/kernels.hpp"
#include "pxy/logconcave.hpp"
#include "pxy/normal.hpp"
#include "pxy/parallel.hpp"
#include "pxy/quadrature.hpp"
#include "pxy/report.hpp"
#include "pxy/rng.hpp"
#include "pxy/simulate.hpp"
