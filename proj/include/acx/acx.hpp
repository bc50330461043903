#pragma once

#include "acx/linalg.hpp"
#include "acx/jet.hpp"
#include "acx/disk_calculus.hpp"
#include "acx/ball_geometry.hpp"
#include "acx/acs_core.hpp"
#include "acx/lift_lab.hpp"
#include "acx/stationary_solver.hpp"
#include "acx/variations.hpp"
#include "acx/ma_lab.hpp"
#include "acx/parallel.hpp"
#include "acx/config.hpp"
#include "acx/report.hpp"
