#pragma once

// Umbrella header for the planar magnetic-control dynamics library.

#include "magdyn/errors.hpp"
#include "magdyn/io.hpp"
#include "magdyn/mat.hpp"
#include "magdyn/perturb.hpp"
#include "magdyn/phase.hpp"
#include "magdyn/physical.hpp"
#include "magdyn/planar.hpp"
#include "magdyn/protocol.hpp"
#include "magdyn/pulse.hpp"
#include "magdyn/strutt.hpp"
#include "magdyn/svg.hpp"
#include "magdyn/theta.hpp"
#include "magdyn/trajectory.hpp"
#include "magdyn/transfer.hpp"
#include "magdyn/version.hpp"
