#pragma once

#include "curvebound/error.hpp"
#include "curvebound/predicates.hpp"
#include "curvebound/plane.hpp"
#include "curvebound/charts.hpp"
#include "curvebound/poly_curve.hpp"
#include "curvebound/support_curve.hpp"
#include "curvebound/geo_maps.hpp"
#include "curvebound/rolling.hpp"
#include "curvebound/cap.hpp"
#include "curvebound/generator.hpp"
#include "curvebound/io.hpp"
#include "curvebound/svg.hpp"
