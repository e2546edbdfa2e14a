#pragma once

#include "cbm/bench.hpp"
#include "cbm/cases.hpp"
#include "cbm/component_set.hpp"
#include "cbm/degradation.hpp"
#include "cbm/io.hpp"
#include "cbm/milp.hpp"
#include "cbm/model.hpp"
#include "cbm/multistage.hpp"
#include "cbm/rng.hpp"
#include "cbm/structural.hpp"
#include "cbm/two_stage.hpp"
