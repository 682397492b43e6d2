#pragma once

// Umbrella header: the whole library in one include.

#include "qmed/common.hpp"
#include "qmed/median.hpp"
#include "qmed/point_set.hpp"
#include "qmed/frame.hpp"
#include "qmed/geometry.hpp"
#include "qmed/solver.hpp"
#include "qmed/quadrature.hpp"
#include "qmed/random.hpp"
#include "qmed/generator.hpp"
#include "qmed/elliptical.hpp"
#include "qmed/estimators.hpp"
#include "qmed/montecarlo.hpp"
#include "qmed/io.hpp"
