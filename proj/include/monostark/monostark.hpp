#pragma once

#include "monostark/errors.hpp"
#include "monostark/units.hpp"
#include "monostark/laguerre.hpp"
#include "monostark/quadrature.hpp"
#include "monostark/parabolic.hpp"
#include "monostark/monopole.hpp"
#include "monostark/dynamics.hpp"
#include "monostark/experiment.hpp"
#include "monostark/scenario.hpp"
#include "monostark/report.hpp"
