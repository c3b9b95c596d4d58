#pragma once

#include "wormhole/analytic.hpp"
#include "wormhole/channel_metrics.hpp"
#include "wormhole/ed/oracle.hpp"
#include "wormhole/errors.hpp"
#include "wormhole/finite_size.hpp"
#include "wormhole/model.hpp"
#include "wormhole/phase_scan.hpp"
#include "wormhole/sd_solver.hpp"
#include "wormhole/version.hpp"
