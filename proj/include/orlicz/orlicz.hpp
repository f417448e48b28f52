#pragma once

#include "orlicz/errors.hpp"
#include "orlicz/quadrature.hpp"
#include "orlicz/growth.hpp"
#include "orlicz/young.hpp"
#include "orlicz/vector_field.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/csv.hpp"
#include "orlicz/evolution.hpp"
#include "orlicz/obstacle.hpp"
#include "orlicz/schwarz.hpp"
#include "orlicz/analysis.hpp"
#include "orlicz/problems.hpp"
#include "orlicz/config.hpp"
#include "orlicz/verify.hpp"
