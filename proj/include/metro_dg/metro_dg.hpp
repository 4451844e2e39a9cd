#pragma once

#include "metro_dg/curve.hpp"
#include "metro_dg/csv.hpp"
#include "metro_dg/demand.hpp"
#include "metro_dg/dg_planner.hpp"
#include "metro_dg/economics.hpp"
#include "metro_dg/error.hpp"
#include "metro_dg/report_json.hpp"
#include "metro_dg/scenario.hpp"
#include "metro_dg/svg.hpp"
