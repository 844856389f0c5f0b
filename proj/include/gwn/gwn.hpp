// gwn: generalized winding numbers for trimmed NURBS surface collections
// SPDX-License-Identifier: MIT

#pragma once

#include "gwn/core.hpp"
#include "gwn/quadrature.hpp"
#include "gwn/knots.hpp"
#include "gwn/curve2.hpp"
#include "gwn/patch.hpp"
#include "gwn/winding2d.hpp"
#include "gwn/intersect.hpp"
#include "gwn/winding3d.hpp"
#include "gwn/baselines.hpp"
#include "gwn/shapes.hpp"
#include "gwn/model_io.hpp"
#include "gwn/runner.hpp"
