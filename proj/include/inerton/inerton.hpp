#pragma once

#include "inerton/constants.hpp"
#include "inerton/csv.hpp"
#include "inerton/dispersion.hpp"
#include "inerton/dynamics.hpp"
#include "inerton/errors.hpp"
#include "inerton/kinematics.hpp"
#include "inerton/lattice_model.hpp"
#include "inerton/model_io.hpp"
#include "inerton/resonator.hpp"
