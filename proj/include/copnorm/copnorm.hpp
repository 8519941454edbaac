#pragma once

// Norms, essential norms, and extremal non-compactness of composition
// operators on the Hardy space with linear fractional symbol, computed by
// reducing the norm equation to root-finding on Gauss hypergeometric
// functions, and cross-checked by direct series and truncated-matrix oracles.

#include "copnorm/error.hpp"
#include "copnorm/gamma.hpp"
#include "copnorm/hypergeometric.hpp"
#include "copnorm/moebius.hpp"
#include "copnorm/normcalc.hpp"
#include "copnorm/oracle.hpp"
#include "copnorm/report_io.hpp"
