#pragma once

#include "thermistor/conformable.hpp"
#include "thermistor/error.hpp"
#include "thermistor/expr.hpp"
#include "thermistor/fixed_point.hpp"
#include "thermistor/grid.hpp"
#include "thermistor/linear.hpp"
#include "thermistor/model.hpp"
#include "thermistor/options.hpp"
#include "thermistor/oracle.hpp"
#include "thermistor/tube.hpp"
