#pragma once

#include "winding/common.hpp"
#include "winding/constants.hpp"
#include "winding/curves.hpp"
#include "winding/geometry.hpp"
#include "winding/harness.hpp"
#include "winding/io.hpp"
#include "winding/montecarlo.hpp"
#include "winding/operator.hpp"
#include "winding/quadrature.hpp"
#include "winding/solver.hpp"
