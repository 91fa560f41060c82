#pragma once

#include "rotosense/angular.hpp"
#include "rotosense/critical.hpp"
#include "rotosense/fidelity.hpp"
#include "rotosense/io.hpp"
#include "rotosense/quadrature.hpp"
#include "rotosense/rational.hpp"
#include "rotosense/rotation.hpp"
#include "rotosense/search.hpp"
#include "rotosense/specfun.hpp"
#include "rotosense/spin.hpp"
#include "rotosense/state.hpp"
