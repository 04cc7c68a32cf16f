#pragma once

// Umbrella header.

#include "plr/errors.hpp"
#include "plr/flux_history.hpp"
#include "plr/hippus.hpp"
#include "plr/image.hpp"
#include "plr/iris_geometry.hpp"
#include "plr/iris_mesh.hpp"
#include "plr/measure.hpp"
#include "plr/model.hpp"
#include "plr/photometry.hpp"
#include "plr/raster.hpp"
#include "plr/schedule.hpp"
#include "plr/simulation.hpp"
#include "plr/trace_io.hpp"
#include "plr/validation.hpp"
