#pragma once

#include "qgeo/bundle.hpp"
#include "qgeo/eigensystem.hpp"
#include "qgeo/errors.hpp"
#include "qgeo/exponential.hpp"
#include "qgeo/io.hpp"
#include "qgeo/matrix.hpp"
#include "qgeo/random.hpp"
#include "qgeo/sampling.hpp"
#include "qgeo/spin.hpp"
#include "qgeo/state_space.hpp"
#include "qgeo/tolerances.hpp"
#include "qgeo/uncertainty.hpp"
